#pragma once

#include <array>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "lie.hpp"
#include "matrix_ops.hpp"

namespace hb {

// Exponential-coordinate chart (a, b) -> exp(a hat(X) + b hat(Y)) over a
// totally geodesic plane.
struct SurfaceChart {
  Signature sig;
  CMat x, y;
  CMat hx, hy;
  PlaneClassification cls;
  double lambda = 0.0;
};

// Classifies the plane first; a NotTotallyGeodesic verdict is an error here.
SurfaceChart make_chart(const CMat& x, const CMat& y);

// Chart over span{X, iX}.
SurfaceChart make_complex_chart(const CMat& x);

CMat chart_point(const SurfaceChart& ch, double a, double b);

struct MetricCoefficients {
  double e = 0.0, f = 0.0, g = 0.0;
  double area_element() const;
};

// First fundamental form of the quotient surface at chart point (a, b):
// tangent vectors are pulled back to the identity and projected onto the
// off-diagonal summand.
MetricCoefficients induced_metric(const SurfaceChart& ch, double a, double b);

enum class CurveKind { Circle, Ellipse, Polygon };
enum class Orientation { Ccw, Cw };

struct CurveSpec {
  CurveKind kind = CurveKind::Circle;
  Eigen::Vector2d center{0.0, 0.0};
  double radius = 0.5;                 // circle
  Eigen::Vector2d radii{0.0, 0.0};     // ellipse semi-axes
  std::vector<Eigen::Vector2d> vertices;  // polygon, implicitly closed
  Orientation orientation = Orientation::Ccw;
  int samples = 512;
};

struct CurvePoint {
  double a = 0.0, b = 0.0;   // chart position
  double da = 0.0, db = 0.0; // velocity in t
};

// Closed, simple, and star-shaped about the centroid; the quadrature and
// the lift both rely on these properties.
void validate_curve(const CurveSpec& spec);

// Position and velocity at t in [0, 1]; polygons advance one edge per
// uniform parameter slot.
CurvePoint curve_eval(const CurveSpec& spec, double t);

// Derivative discontinuities in (0, 1): polygon corners, else empty.
std::vector<double> curve_breakpoints(const CurveSpec& spec);

// +1 when the traversal winds counterclockwise in chart coordinates.
// Circles and ellipses read the orientation field; polygons read their
// vertex order.
int curve_winding_sign(const CurveSpec& spec);

Eigen::Vector2d curve_centroid(const CurveSpec& spec);

// Boundary distance from the centroid along direction phi.
double curve_radius_at(const CurveSpec& spec, double phi);

struct QuadratureConfig {
  int radial = 64;
  int angular = 128;
  int max_refinements = 6;
  double tol = 1e-8;
};

struct AreaResult {
  double area = 0.0;
  int radial_used = 0;
  int angular_used = 0;
  int refinements = 0;
  double last_change = 0.0;
};

// Riemannian area of the enclosed region: polar quadrature about the
// centroid, Gauss-Legendre in the radius, and mesh doubling until the
// change falls below tol. Throws QuadratureNotConverged past the cap.
AreaResult area_of_region(const SurfaceChart& ch, const CurveSpec& spec,
                          const QuadratureConfig& quad);

// Nodes and weights on [0, 1], cached per order; thread-safe.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order);

}  // namespace hb

#include "surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace hb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross2(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

}  // namespace

SurfaceChart make_chart(const CMat& x, const CMat& y) {
  PlaneClassification cls = classify_plane(x, y);
  require(cls.verdict != Verdict::NotTotallyGeodesic, Status::NotTotallyGeodesic,
          "plane fails the geodesic closure conditions: " + cls.witnesses);
  SurfaceChart ch;
  ch.sig = make_signature(static_cast<int>(x.cols()), static_cast<int>(x.rows()));
  ch.x = x;
  ch.y = y;
  ch.hx = hat(ch.sig, x).mat;
  ch.hy = hat(ch.sig, y).mat;
  ch.cls = std::move(cls);
  ch.lambda = *ch.cls.lambda;
  return ch;
}

SurfaceChart make_complex_chart(const CMat& x) {
  return make_chart(x, CMat(cplx(0, 1) * x));
}

CMat chart_point(const SurfaceChart& ch, double a, double b) {
  return expm(CMat(a * ch.hx + b * ch.hy));
}

double MetricCoefficients::area_element() const {
  const double det = e * g - f * f;
  return det > 0.0 ? std::sqrt(det) : 0.0;
}

MetricCoefficients induced_metric(const SurfaceChart& ch, double a, double b) {
  const CMat arg = a * ch.hx + b * ch.hy;
  const auto [g, dga] = expm_with_frechet(arg, ch.hx);
  const CMat dgb = expm_frechet(arg, ch.hy);
  const CMat ginv = group_inverse(ch.sig, g);
  const CMat xa = proj_m(ch.sig, CMat(ginv * dga));
  const CMat xb = proj_m(ch.sig, CMat(ginv * dgb));
  MetricCoefficients out;
  out.e = inner_product(xa, xa);
  out.f = inner_product(xa, xb);
  out.g = inner_product(xb, xb);
  return out;
}

namespace {

int polygon_size(const CurveSpec& spec) { return static_cast<int>(spec.vertices.size()); }

// Sector angles of polygon vertices about the centroid, unwrapped so they
// move monotonically in the traversal direction and end one full turn away.
std::vector<double> unwrapped_vertex_angles(const CurveSpec& spec,
                                            const Eigen::Vector2d& c, int sign) {
  const int k = polygon_size(spec);
  std::vector<double> phi(k + 1);
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d p = spec.vertices[i] - c;
    phi[i] = std::atan2(p.y(), p.x());
  }
  for (int i = 1; i < k; ++i) {
    double step = sign * (phi[i] - phi[i - 1]);
    step -= kTwoPi * std::floor(step / kTwoPi);
    phi[i] = phi[i - 1] + sign * step;
  }
  phi[k] = phi[0] + sign * kTwoPi;
  return phi;
}

}  // namespace

void validate_curve(const CurveSpec& spec) {
  require(spec.samples >= 8, Status::InvalidArgument, "curve needs samples >= 8");
  switch (spec.kind) {
    case CurveKind::Circle:
      require(std::isfinite(spec.radius) && spec.radius >= 0.0,
              Status::InvalidArgument, "circle radius must be nonnegative");
      return;
    case CurveKind::Ellipse:
      require(spec.radii.allFinite() && spec.radii.x() > 0.0 && spec.radii.y() > 0.0,
              Status::NonSimpleCurve, "ellipse semi-axes must be positive");
      return;
    case CurveKind::Polygon:
      break;
  }
  const int k = polygon_size(spec);
  require(k >= 3, Status::NonSimpleCurve, "polygon needs at least three vertices");
  const Eigen::Vector2d c = curve_centroid(spec);
  double scale = 0.0;
  for (const auto& v : spec.vertices) scale = std::max(scale, (v - c).norm());
  require(scale > 0.0, Status::NonSimpleCurve, "polygon vertices coincide");
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d d = spec.vertices[(i + 1) % k] - spec.vertices[i];
    require(d.norm() > 1e-12 * scale, Status::NonSimpleCurve,
            "polygon has a repeated vertex");
  }
  // Star-shape about the centroid: every centroid-vertex-vertex triangle
  // must keep one orientation, so rays from the centroid cross once.
  int sign = 0;
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d p = spec.vertices[i] - c;
    const Eigen::Vector2d q = spec.vertices[(i + 1) % k] - c;
    const double cr = cross2(p, q);
    require(std::abs(cr) > 1e-12 * scale * scale, Status::NotStarShaped,
            "centroid lies on a polygon edge line");
    const int s = cr > 0 ? 1 : -1;
    require(sign == 0 || s == sign, Status::NotStarShaped,
            "polygon is not star-shaped about its centroid");
    sign = s;
  }
}

CurvePoint curve_eval(const CurveSpec& spec, double t) {
  CurvePoint out;
  const double sgn = spec.orientation == Orientation::Ccw ? 1.0 : -1.0;
  switch (spec.kind) {
    case CurveKind::Circle: {
      const double ang = sgn * kTwoPi * t;
      out.a = spec.center.x() + spec.radius * std::cos(ang);
      out.b = spec.center.y() + spec.radius * std::sin(ang);
      out.da = -sgn * kTwoPi * spec.radius * std::sin(ang);
      out.db = sgn * kTwoPi * spec.radius * std::cos(ang);
      return out;
    }
    case CurveKind::Ellipse: {
      const double ang = sgn * kTwoPi * t;
      out.a = spec.center.x() + spec.radii.x() * std::cos(ang);
      out.b = spec.center.y() + spec.radii.y() * std::sin(ang);
      out.da = -sgn * kTwoPi * spec.radii.x() * std::sin(ang);
      out.db = sgn * kTwoPi * spec.radii.y() * std::cos(ang);
      return out;
    }
    case CurveKind::Polygon: {
      const int k = polygon_size(spec);
      const double u = std::clamp(t, 0.0, 1.0) * k;
      const int i = std::min(static_cast<int>(u), k - 1);
      const double s = u - i;
      const Eigen::Vector2d v0 = spec.vertices[i];
      const Eigen::Vector2d v1 = spec.vertices[(i + 1) % k];
      const Eigen::Vector2d pos = v0 + s * (v1 - v0);
      out.a = pos.x();
      out.b = pos.y();
      out.da = k * (v1.x() - v0.x());
      out.db = k * (v1.y() - v0.y());
      return out;
    }
  }
  fail(Status::Internal, "unreachable curve kind");
}

std::vector<double> curve_breakpoints(const CurveSpec& spec) {
  if (spec.kind != CurveKind::Polygon) return {};
  const int k = polygon_size(spec);
  std::vector<double> bp(k - 1);
  for (int i = 1; i < k; ++i) bp[i - 1] = static_cast<double>(i) / k;
  return bp;
}

int curve_winding_sign(const CurveSpec& spec) {
  if (spec.kind != CurveKind::Polygon)
    return spec.orientation == Orientation::Ccw ? 1 : -1;
  const int k = polygon_size(spec);
  double twice_area = 0.0;
  for (int i = 0; i < k; ++i)
    twice_area += cross2(spec.vertices[i], spec.vertices[(i + 1) % k]);
  return twice_area >= 0.0 ? 1 : -1;
}

Eigen::Vector2d curve_centroid(const CurveSpec& spec) {
  if (spec.kind != CurveKind::Polygon) return spec.center;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& v : spec.vertices) c += v;
  return c / polygon_size(spec);
}

double curve_radius_at(const CurveSpec& spec, double phi) {
  switch (spec.kind) {
    case CurveKind::Circle:
      return spec.radius;
    case CurveKind::Ellipse:
      return spec.radii.x() * spec.radii.y() /
             std::hypot(spec.radii.y() * std::cos(phi),
                        spec.radii.x() * std::sin(phi));
    case CurveKind::Polygon:
      break;
  }
  const Eigen::Vector2d c = curve_centroid(spec);
  const Eigen::Vector2d d(std::cos(phi), std::sin(phi));
  const int k = polygon_size(spec);
  double best = 0.0;
  for (int i = 0; i < k; ++i) {
    const Eigen::Vector2d p = spec.vertices[i] - c;
    const Eigen::Vector2d q = spec.vertices[(i + 1) % k] - c;
    const double denom = cross2(d, q - p);
    if (denom == 0.0) continue;
    const double rho = cross2(p, q) / denom;
    const double s = cross2(p, d) / denom;  // position along the edge
    if (rho > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::max(best, rho);
  }
  return best;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int order) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  require(order >= 1 && order <= 1 << 14, Status::InvalidArgument,
          "quadrature order out of range");

  // Newton iteration on Legendre polynomials over [-1, 1], then map to [0, 1].
  std::vector<double> nodes(order), weights(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[order - 1 - i] = 0.5 * (x + 1.0);
    weights[order - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::make_pair(std::move(nodes), std::move(weights)))
      .first->second;
}

namespace {

// One pass of the polar quadrature at fixed mesh sizes.
double polar_area_pass(const SurfaceChart& ch, const CurveSpec& spec,
                       int radial, int angular) {
  const Eigen::Vector2d c = curve_centroid(spec);
  const auto& [rn, rw] = gauss_legendre(radial);

  auto radial_integral = [&](double phi, double rho) {
    if (rho <= 0.0) return 0.0;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    double acc = 0.0;
    for (int i = 0; i < radial; ++i) {
      const double r = rho * rn[i];
      const MetricCoefficients met =
          induced_metric(ch, c.x() + r * cphi, c.y() + r * sphi);
      acc += rw[i] * met.area_element() * r;
    }
    return acc * rho;
  };

  if (spec.kind != CurveKind::Polygon) {
    // Periodic smooth boundary: midpoint rule in the angle.
    double acc = 0.0;
    for (int j = 0; j < angular; ++j) {
      const double phi = kTwoPi * (j + 0.5) / angular;
      acc += radial_integral(phi, curve_radius_at(spec, phi));
    }
    return acc * kTwoPi / angular;
  }

  // Kinked boundary: Gauss-Legendre per vertex sector, nodes allotted by
  // sector angle. Within a sector the ray meets one fixed edge.
  const int k = polygon_size(spec);
  const int sign = curve_winding_sign(spec);
  const std::vector<double> phi = unwrapped_vertex_angles(spec, c, sign);
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double span = std::abs(phi[i + 1] - phi[i]);
    const int order =
        std::max(2, static_cast<int>(std::lround(angular * span / kTwoPi)));
    const auto& [an, aw] = gauss_legendre(order);
    const Eigen::Vector2d p = spec.vertices[i] - c;
    const Eigen::Vector2d q = spec.vertices[(i + 1) % k] - c;
    for (int j = 0; j < order; ++j) {
      const double a = phi[i] + (phi[i + 1] - phi[i]) * an[j];
      const Eigen::Vector2d d(std::cos(a), std::sin(a));
      const double rho = cross2(p, q) / cross2(d, q - p);
      acc += aw[j] * span * radial_integral(a, rho);
    }
  }
  return acc;
}

}  // namespace

AreaResult area_of_region(const SurfaceChart& ch, const CurveSpec& spec,
                          const QuadratureConfig& quad) {
  validate_curve(spec);
  require(quad.radial >= 2 && quad.angular >= 2, Status::InvalidArgument,
          "quadrature needs at least two nodes per direction");
  require(quad.tol > 0.0, Status::InvalidArgument, "quadrature tolerance must be positive");

  AreaResult out;
  int radial = quad.radial;
  int angular = quad.angular;
  double prev = polar_area_pass(ch, spec, radial, angular);
  double change = 0.0;
  for (int level = 0; level <= quad.max_refinements; ++level) {
    radial *= 2;
    angular *= 2;
    const double next = polar_area_pass(ch, spec, radial, angular);
    change = std::abs(next - prev) / std::max(std::abs(next), 1e-12);
    if (change <= quad.tol) {
      out.area = next;
      out.radial_used = radial;
      out.angular_used = angular;
      out.refinements = level + 1;
      out.last_change = change;
      return out;
    }
    prev = next;
  }
  std::ostringstream msg;
  msg << "area quadrature still changing by " << change << " (relative) after "
      << quad.max_refinements << " refinements";
  fail(Status::QuadratureNotConverged, msg.str());
}

}  // namespace hb

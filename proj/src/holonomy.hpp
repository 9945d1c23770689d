#pragma once

#include <functional>
#include <string>
#include <vector>

#include "surface.hpp"

namespace hb {

struct IntegratorConfig {
  int steps = 4096;
  int order = 4;  // 2 = midpoint, 4 = commutator-free two-exponential
  int renormalize_every = 64;
};

struct HolonomyReport {
  CMat v_full, v_n, v_m;
  double theta = 0.0;      // arg(tr(V_n)/n), principal value
  double area = 0.0;
  double predicted = 0.0;  // principal value of the phase the law demands
  double law_residual = 0.0;      // ||V_n - e^{i predicted} I||_F
  double offdiag_residual = 0.0;  // off-diagonal blocks of V_full
  double scalar_residual = 0.0;   // ||V_n - (tr(V_n)/n) I||_F
  AreaResult area_detail;
};

using CurveFn = std::function<CurvePoint(double)>;

// Parallel-transport compensator along the chart lift g(t): integrates
// k' = -eta k with eta = proj_h(g^{-1} g') and returns k(1). Steps are
// distributed over the pieces between breakpoints by chart arc length, so
// derivative kinks never land inside a step.
CMat integrate_compensator(const SurfaceChart& ch, const CurveFn& fn,
                           const std::vector<double>& breakpoints,
                           const IntegratorConfig& cfg);

// Full pipeline for one closed curve: compensator, block extraction,
// diagnostics, area, and the phase the holonomy law predicts for this
// chart. Curves wind in chart coordinates; the prediction flips sign with
// the complex orientation of the chart (sign of Im mu).
HolonomyReport horizontal_holonomy(const SurfaceChart& ch, const CurveSpec& curve,
                                   const IntegratorConfig& cfg,
                                   const QuadratureConfig& quad = {});

struct LawRow {
  std::string curve_id;
  double radius = 0.0;
  double area = 0.0;
  double theta = 0.0;
  double predicted = 0.0;
  double law_residual = 0.0;  // |e^{i theta} - e^{i predicted}|
  double offdiag_residual = 0.0;
  double scalar_residual = 0.0;
  Status status = Status::Ok;
  std::string message;
};

// One row per curve; a failing curve yields a row with its error status
// instead of aborting the batch. Row law residuals compare phases on the
// circle group, so wrapped areas still score near zero.
std::vector<LawRow> verify_area_law(const SurfaceChart& ch,
                                    const std::vector<CurveSpec>& curves,
                                    const IntegratorConfig& cfg,
                                    const QuadratureConfig& quad);

// Checks the second-factor block V_m against the closed fiber form at the
// measured theta. The chart must be built over (X, iX).
double verify_um_side(const SurfaceChart& ch, const CurveSpec& curve,
                      const IntegratorConfig& cfg,
                      const QuadratureConfig& quad = {});

// Golden configuration n = m = 1, X = (1): compares the full holonomy
// against exp(-2 A E3) for a ccw circle of the given chart radius.
double verify_su11_consistency(const IntegratorConfig& cfg, double radius = 0.7,
                               const QuadratureConfig& quad = {});

// Nominal radius reported in law tables: circle radius, ellipse geometric
// mean, polygon max centroid distance.
double curve_reference_radius(const CurveSpec& spec);

// Removes 2 pi jumps assuming consecutive gaps below pi.
std::vector<double> unwrap_phases(std::vector<double> theta);

}  // namespace hb

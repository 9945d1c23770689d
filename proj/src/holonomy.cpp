#include "holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace hb {

namespace {

constexpr double kBlockLeakTol = 1e-6;

CMat block_expm(const Signature& sig, const CMat& a) {
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  out.topLeftCorner(sig.n, sig.n) = expm(CMat(a.topLeftCorner(sig.n, sig.n)));
  out.bottomRightCorner(sig.m, sig.m) =
      expm(CMat(a.bottomRightCorner(sig.m, sig.m)));
  return out;
}

CMat polar_unitary(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

void renormalize_blocks(const Signature& sig, CMat& k) {
  k.topLeftCorner(sig.n, sig.n) =
      polar_unitary(CMat(k.topLeftCorner(sig.n, sig.n)));
  k.bottomRightCorner(sig.m, sig.m) =
      polar_unitary(CMat(k.bottomRightCorner(sig.m, sig.m)));
}

// Connection coefficient at one curve sample.
CMat eta_at(const SurfaceChart& ch, const CurvePoint& p) {
  const CMat pos = p.a * ch.hx + p.b * ch.hy;
  const CMat vel = p.da * ch.hx + p.db * ch.hy;
  const auto [g, dg] = expm_with_frechet(pos, vel);
  return proj_h(ch.sig, CMat(group_inverse(ch.sig, g) * dg));
}

double chord_length(const CurveFn& fn, double t0, double t1) {
  const int probes = 8;
  double len = 0.0;
  CurvePoint prev = fn(t0);
  for (int i = 1; i <= probes; ++i) {
    const CurvePoint cur = fn(t0 + (t1 - t0) * i / probes);
    len += std::hypot(cur.a - prev.a, cur.b - prev.b);
    prev = cur;
  }
  return len;
}

}  // namespace

CMat integrate_compensator(const SurfaceChart& ch, const CurveFn& fn,
                           const std::vector<double>& breakpoints,
                           const IntegratorConfig& cfg) {
  require(cfg.steps >= 8, Status::InvalidArgument, "integrator needs steps >= 8");
  require(cfg.order == 2 || cfg.order == 4, Status::InvalidArgument,
          "integrator order must be 2 or 4");
  require(cfg.renormalize_every >= 1, Status::InvalidArgument,
          "renormalize_every must be positive");

  {
    const CurvePoint head = fn(0.0);
    const CurvePoint tail = fn(1.0);
    require(std::hypot(tail.a - head.a, tail.b - head.b) <= 1e-12,
            Status::NonClosedCurve, "curve endpoints do not meet");
  }

  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 0.0 && b < 1.0) cuts.push_back(b);
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());

  const int pieces = static_cast<int>(cuts.size()) - 1;
  std::vector<double> lengths(pieces);
  double total = 0.0;
  for (int i = 0; i < pieces; ++i) {
    lengths[i] = chord_length(fn, cuts[i], cuts[i + 1]);
    total += lengths[i];
  }

  // Gauss nodes and weights of the two-exponential fourth-order scheme.
  const double rt3 = std::sqrt(3.0);
  const double c1 = (3.0 - rt3) / 6.0, c2 = (3.0 + rt3) / 6.0;
  const double wa = (3.0 + 2.0 * rt3) / 12.0, wb = (3.0 - 2.0 * rt3) / 12.0;

  CMat k = CMat::Identity(ch.sig.dim(), ch.sig.dim());
  int since_renorm = 0;
  for (int piece = 0; piece < pieces; ++piece) {
    const int ns =
        total > 0.0
            ? std::max(1, static_cast<int>(std::lround(cfg.steps * lengths[piece] / total)))
            : std::max(1, cfg.steps / pieces);
    const double dt = (cuts[piece + 1] - cuts[piece]) / ns;
    for (int i = 0; i < ns; ++i) {
      const double t = cuts[piece] + i * dt;
      if (cfg.order == 2) {
        const CMat eta = eta_at(ch, fn(t + 0.5 * dt));
        k = block_expm(ch.sig, CMat(-dt * eta)) * k;
      } else {
        const CMat a1 = -eta_at(ch, fn(t + c1 * dt));
        const CMat a2 = -eta_at(ch, fn(t + c2 * dt));
        k = block_expm(ch.sig, CMat(dt * (wb * a1 + wa * a2))) *
            block_expm(ch.sig, CMat(dt * (wa * a1 + wb * a2))) * k;
      }
      if (++since_renorm >= cfg.renormalize_every) {
        renormalize_blocks(ch.sig, k);
        since_renorm = 0;
      }
    }
  }
  renormalize_blocks(ch.sig, k);
  return k;
}

HolonomyReport horizontal_holonomy(const SurfaceChart& ch, const CurveSpec& curve,
                                   const IntegratorConfig& cfg,
                                   const QuadratureConfig& quad) {
  validate_curve(curve);
  const CurveFn fn = [&curve](double t) { return curve_eval(curve, t); };

  HolonomyReport rep;
  rep.v_full = integrate_compensator(ch, fn, curve_breakpoints(curve), cfg);

  const int n = ch.sig.n, m = ch.sig.m;
  CMat offdiag = rep.v_full;
  offdiag.topLeftCorner(n, n).setZero();
  offdiag.bottomRightCorner(m, m).setZero();
  rep.offdiag_residual = offdiag.norm();
  {
    std::ostringstream msg;
    msg << "holonomy leaked " << rep.offdiag_residual
        << " outside the diagonal blocks";
    require(rep.offdiag_residual <= kBlockLeakTol, Status::BlockLeakage, msg.str());
  }

  rep.v_n = rep.v_full.topLeftCorner(n, n);
  rep.v_m = rep.v_full.bottomRightCorner(m, m);
  const cplx mean_phase = rep.v_n.trace() / static_cast<double>(n);
  rep.scalar_residual = (rep.v_n - mean_phase * CMat::Identity(n, n)).norm();
  rep.theta = std::arg(mean_phase);

  rep.area_detail = area_of_region(ch, curve, quad);
  rep.area = rep.area_detail.area;

  double target = 0.0;
  if (ch.cls.verdict == Verdict::ComplexSurface) {
    // The chart winding is geometric; the complex structure orients the
    // surface by the sign of Im mu.
    const int sign = curve_winding_sign(curve) * (ch.cls.mu->imag() > 0 ? 1 : -1);
    target = sign * 2.0 * rep.area / n;
  }
  rep.predicted = std::atan2(std::sin(target), std::cos(target));
  rep.law_residual =
      (rep.v_n - std::exp(cplx(0, rep.predicted)) * CMat::Identity(n, n)).norm();
  return rep;
}

std::vector<LawRow> verify_area_law(const SurfaceChart& ch,
                                    const std::vector<CurveSpec>& curves,
                                    const IntegratorConfig& cfg,
                                    const QuadratureConfig& quad) {
  std::vector<LawRow> rows;
  rows.reserve(curves.size());
  int index = 0;
  for (const CurveSpec& curve : curves) {
    LawRow row;
    std::ostringstream id;
    switch (curve.kind) {
      case CurveKind::Circle: id << "circle"; break;
      case CurveKind::Ellipse: id << "ellipse"; break;
      case CurveKind::Polygon: id << "polygon"; break;
    }
    id << "-" << index++;
    row.curve_id = id.str();
    row.radius = curve_reference_radius(curve);
    try {
      const HolonomyReport rep = horizontal_holonomy(ch, curve, cfg, quad);
      row.area = rep.area;
      row.theta = rep.theta;
      row.predicted = rep.predicted;
      row.law_residual =
          std::abs(std::exp(cplx(0, rep.theta)) - std::exp(cplx(0, rep.predicted)));
      row.offdiag_residual = rep.offdiag_residual;
      row.scalar_residual = rep.scalar_residual;
    } catch (const Error& e) {
      row.status = e.status();
      row.message = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double verify_um_side(const SurfaceChart& ch, const CurveSpec& curve,
                      const IntegratorConfig& cfg, const QuadratureConfig& quad) {
  require((ch.y - cplx(0, 1) * ch.x).norm() <= 1e-10 * ch.x.norm(),
          Status::InvalidArgument,
          "second-factor comparison needs the chart over (X, iX)");
  const HolonomyReport rep = horizontal_holonomy(ch, curve, cfg, quad);
  const CMat closed = fiber_closed_form(ch.x, rep.theta);
  return (rep.v_m - closed.bottomRightCorner(ch.sig.m, ch.sig.m)).norm();
}

double verify_su11_consistency(const IntegratorConfig& cfg, double radius,
                               const QuadratureConfig& quad) {
  CMat x(1, 1);
  x << 1.0;
  const SurfaceChart ch = make_complex_chart(x);
  CurveSpec circle;
  circle.kind = CurveKind::Circle;
  circle.radius = radius;
  const HolonomyReport rep = horizontal_holonomy(ch, circle, cfg, quad);
  const CMat expected = expm(CMat(-2.0 * rep.area * su11_e3()));
  return (rep.v_full - expected).norm();
}

double curve_reference_radius(const CurveSpec& spec) {
  switch (spec.kind) {
    case CurveKind::Circle:
      return spec.radius;
    case CurveKind::Ellipse:
      return std::sqrt(spec.radii.x() * spec.radii.y());
    case CurveKind::Polygon: {
      const Eigen::Vector2d c = curve_centroid(spec);
      double r = 0.0;
      for (const auto& v : spec.vertices) r = std::max(r, (v - c).norm());
      return r;
    }
  }
  return 0.0;
}

std::vector<double> unwrap_phases(std::vector<double> theta) {
  constexpr double period = 2.0 * std::numbers::pi;
  for (size_t i = 1; i < theta.size(); ++i) {
    const double jump = std::round((theta[i - 1] - theta[i]) / period);
    theta[i] += period * jump;
  }
  return theta;
}

}  // namespace hb

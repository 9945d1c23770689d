#include "lie.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "rng.hpp"

namespace hb {

double algebra_residual(const Signature& sig, const CMat& mat) {
  const CMat lam = lambda_matrix(sig);
  const CMat defect = adjoint(mat) * lam + lam * mat;
  return defect.norm();
}

AlgebraElement algebra_element(const Signature& sig, const CMat& mat) {
  require(mat.rows() == sig.dim() && mat.cols() == sig.dim(),
          Status::DimensionMismatch, "algebra element must be (n+m) x (n+m)");
  require(all_finite(mat), Status::NotFinite, "algebra element has non-finite entries");
  require(algebra_residual(sig, mat) <= kAlgebraTol * (1.0 + mat.norm()),
          Status::InvalidArgument, "matrix does not satisfy a* L + L a = 0");
  return AlgebraElement{sig, mat};
}

AlgebraElement hat(const Signature& sig, const CMat& x) {
  require(x.rows() == sig.m && x.cols() == sig.n, Status::DimensionMismatch,
          "hat expects an m x n matrix");
  require(all_finite(x), Status::NotFinite, "hat argument has non-finite entries");
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  out.topRightCorner(sig.n, sig.m) = adjoint(x);
  out.bottomLeftCorner(sig.m, sig.n) = x;
  return AlgebraElement{sig, out};
}

CMat proj_h(const Signature& sig, const CMat& a) {
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  auto skew = [](const CMat& b) -> CMat { return 0.5 * (b - adjoint(b)); };
  out.topLeftCorner(sig.n, sig.n) = skew(a.topLeftCorner(sig.n, sig.n));
  out.bottomRightCorner(sig.m, sig.m) = skew(a.bottomRightCorner(sig.m, sig.m));
  return out;
}

CMat proj_m(const Signature& sig, const CMat& a) {
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  const CMat x = 0.5 * (a.bottomLeftCorner(sig.m, sig.n) +
                        adjoint(a.topRightCorner(sig.n, sig.m)));
  out.bottomLeftCorner(sig.m, sig.n) = x;
  out.topRightCorner(sig.n, sig.m) = adjoint(x);
  return out;
}

std::pair<AlgebraElement, AlgebraElement> decompose(const AlgebraElement& a) {
  return {AlgebraElement{a.sig, proj_h(a.sig, a.mat)},
          AlgebraElement{a.sig, proj_m(a.sig, a.mat)}};
}

ConeCheck unitary_cone_check(const CMat& x) {
  require(all_finite(x), Status::NotFinite, "cone check input has non-finite entries");
  const int n = static_cast<int>(x.cols());
  const CMat gram = adjoint(x) * x;
  ConeCheck out;
  out.lambda = gram.real().trace() / n;
  out.residual = (gram - out.lambda * CMat::Identity(n, n)).norm();
  out.is_member = out.lambda > kLambdaMin &&
                  out.residual <= kScalarTol * (1.0 + std::abs(out.lambda));
  return out;
}

MuExtract mu_extract(const CMat& x, const CMat& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), Status::DimensionMismatch,
          "mu extraction needs same-shaped matrices");
  const int n = static_cast<int>(x.cols());
  const CMat prod = adjoint(x) * y;
  MuExtract out;
  out.mu = prod.trace() / static_cast<double>(n);
  out.residual = (prod - out.mu * CMat::Identity(n, n)).norm();
  out.is_scalar = out.residual <= kScalarTol * (1.0 + std::abs(out.mu));
  return out;
}

AlgebraElement triple_bracket(const AlgebraElement& a, const AlgebraElement& b,
                              const AlgebraElement& c) {
  require(a.sig.n == b.sig.n && a.sig.m == b.sig.m && a.sig.n == c.sig.n &&
              a.sig.m == c.sig.m,
          Status::DimensionMismatch, "triple bracket on mixed signatures");
  const CMat inner = a.mat * b.mat - b.mat * a.mat;
  return AlgebraElement{a.sig, inner * c.mat - c.mat * inner};
}

CMat lemma_calculation_formula(const CMat& x, const CMat& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), Status::DimensionMismatch,
          "formula needs same-shaped matrices");
  const Eigen::Index m = x.rows();
  const Eigen::Index n = x.cols();
  auto h = [](const Eigen::Ref<const Eigen::VectorXcd>& u,
              const Eigen::Ref<const Eigen::VectorXcd>& v) { return u.dot(v); };
  CMat z(m, n);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index k = 0; k < n; ++k) {
      cplx acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        acc += x(r, j) * (2.0 * h(y.col(j), x.col(k)) - h(x.col(j), y.col(k)));
        acc -= y(r, j) * h(x.col(j), x.col(k));
      }
      z(r, k) = acc;
    }
  }
  return z;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::NotTotallyGeodesic: return "not_totally_geodesic";
    case Verdict::FlatSurface: return "flat";
    case Verdict::ComplexSurface: return "complex";
  }
  return "unknown";
}

namespace {

// Real inner product on complex matrices viewed as real vectors.
double rdot(const CMat& a, const CMat& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

}  // namespace

SpanFit real_span_fit(const CMat& target, const CMat& b1, const CMat& b2) {
  Eigen::Matrix2d gram;
  gram << rdot(b1, b1), rdot(b1, b2), rdot(b2, b1), rdot(b2, b2);
  Eigen::Vector2d rhs(rdot(b1, target), rdot(b2, target));
  const Eigen::Vector2d coef = gram.ldlt().solve(rhs);
  SpanFit out;
  out.s = coef(0);
  out.t = coef(1);
  const double scale = target.norm();
  out.residual = (target - coef(0) * b1 - coef(1) * b2).norm() / (scale > 0 ? scale : 1.0);
  return out;
}

double closure_residual(const CMat& x, const CMat& y) {
  const Signature sig = make_signature(static_cast<int>(x.cols()),
                                       static_cast<int>(x.rows()));
  const AlgebraElement hx = hat(sig, x);
  const AlgebraElement hy = hat(sig, y);
  const double r1 = real_span_fit(triple_bracket(hx, hy, hx).mat, hx.mat, hy.mat).residual;
  const double r2 = real_span_fit(triple_bracket(hy, hx, hy).mat, hx.mat, hy.mat).residual;
  return std::max(r1, r2);
}

PlaneClassification classify_plane(const CMat& x, const CMat& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), Status::DimensionMismatch,
          "plane spanned by same-shaped matrices");
  require(all_finite(x) && all_finite(y), Status::NotFinite,
          "plane generator has non-finite entries");
  require(x.rows() >= x.cols(), Status::InvalidArgument,
          "cone matrices need at least as many rows as columns");

  const ConeCheck cone = unitary_cone_check(x);
  {
    std::ostringstream msg;
    msg << "X*X deviates from a positive multiple of the identity (residual "
        << cone.residual << ", lambda " << cone.lambda << ")";
    require(cone.is_member, Status::NotInCone, msg.str());
  }

  // Reject spans of real dimension < 2: Y must not be a real multiple of X.
  require(y.norm() > kSpanTol, Status::PlaneDegenerate, "second generator vanishes");
  const double proj = rdot(x, y) / rdot(x, x);
  require((y - proj * x).norm() > kSpanTol * y.norm(), Status::PlaneDegenerate,
          "generators span less than two real dimensions");

  const MuExtract mu = mu_extract(x, y);
  {
    std::ostringstream msg;
    msg << "X*Y is not a scalar matrix (residual " << mu.residual << ")";
    require(mu.is_scalar, Status::StarViolated, msg.str());
  }

  PlaneClassification out;
  out.mu = mu.mu;
  out.lambda = cone.lambda;
  out.closure_residual = closure_residual(x, y);

  if (std::abs(mu.mu.imag()) > kScalarTol) {
    // Non-real pairing: geodesic closure forces iX into the plane.
    const SpanFit fit = real_span_fit(CMat(cplx(0, 1) * x), x, y);
    if (fit.residual <= kSpanTol) {
      out.verdict = Verdict::ComplexSurface;
      std::ostringstream msg;
      msg << "iX = " << fit.s << " X + " << fit.t << " Y (residual " << fit.residual << ")";
      out.witnesses = msg.str();
    } else {
      out.verdict = Verdict::NotTotallyGeodesic;
      std::ostringstream msg;
      msg << "Im(mu) = " << mu.mu.imag() << " but iX is outside the plane (residual "
          << fit.residual << ")";
      out.witnesses = msg.str();
    }
    return out;
  }

  // Real pairing: flat exactly when Y itself lies in the cone.
  const ConeCheck ycone = unitary_cone_check(y);
  if (ycone.is_member) {
    out.verdict = Verdict::FlatSurface;
    std::ostringstream msg;
    msg << "Y*Y = " << ycone.lambda << " I (residual " << ycone.residual << ")";
    out.witnesses = msg.str();
  } else {
    out.verdict = Verdict::NotTotallyGeodesic;
    std::ostringstream msg;
    msg << "real pairing but Y*Y is not a positive scalar matrix (residual "
        << ycone.residual << ")";
    out.witnesses = msg.str();
  }
  return out;
}

AlgebraElement k_matrix(const CMat& x) {
  const Signature sig = make_signature(static_cast<int>(x.cols()),
                                       static_cast<int>(x.rows()));
  const ConeCheck cone = unitary_cone_check(x);
  require(cone.is_member, Status::NotInCone, "curvature midpoint needs X in the cone");
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  out.topLeftCorner(sig.n, sig.n) =
      cplx(0, -cone.lambda) * CMat::Identity(sig.n, sig.n);
  out.bottomRightCorner(sig.m, sig.m) = cplx(0, 1) * (x * adjoint(x));
  return AlgebraElement{sig, out};
}

CMat su11_e1() {
  CMat e(2, 2);
  e << 0, 1, 1, 0;
  return e;
}

CMat su11_e2() {
  CMat e(2, 2);
  e << 0, cplx(0, -1), cplx(0, 1), 0;
  return e;
}

CMat su11_e3() {
  CMat e(2, 2);
  e << cplx(0, -1), 0, 0, cplx(0, 1);
  return e;
}

AlgebraElement su11_embed(const CMat& x, double a, double b, double c) {
  const Signature sig = make_signature(static_cast<int>(x.cols()),
                                       static_cast<int>(x.rows()));
  const ConeCheck cone = unitary_cone_check(x);
  require(cone.is_member, Status::NotInCone, "embedding needs X in the cone");
  const double rl = std::sqrt(cone.lambda);
  const CMat hx = hat(sig, x).mat;
  const CMat hix = hat(sig, CMat(cplx(0, 1) * x)).mat;
  const CMat k = k_matrix(x).mat;
  return AlgebraElement{sig, (a / rl) * hx + (b / rl) * hix + (c / cone.lambda) * k};
}

namespace {

// Orthonormal m x n frame orthogonal to col(X); needs m >= 2n columns of room.
CMat orthocomplement_frame(CounterRng& rng, const CMat& x) {
  const Eigen::Index m = x.rows();
  const Eigen::Index n = x.cols();
  Eigen::HouseholderQR<CMat> xq(x);
  const CMat qx = xq.householderQ() * CMat::Identity(m, n);
  CMat g = random_gaussian(rng, static_cast<int>(m), static_cast<int>(n));
  g -= qx * (qx.adjoint() * g);
  Eigen::HouseholderQR<CMat> gq(g);
  return gq.householderQ() * CMat::Identity(m, n);
}

double random_sign(CounterRng& rng) { return rng.uniform() < 0.5 ? -1.0 : 1.0; }

}  // namespace

PlanePair make_complex_pair(CounterRng& rng, const Signature& sig, double lambda) {
  const CMat x = random_cone_member(rng, sig.m, sig.n, lambda);
  // Y = (s + i t) X, t != 0: the span contains iX.
  const double s = rng.uniform(-1.5, 1.5);
  const double t = random_sign(rng) * rng.uniform(0.3, 2.0);
  return {x, CMat(cplx(s, t) * x), Verdict::ComplexSurface};
}

PlanePair make_flat_pair(CounterRng& rng, const Signature& sig, double lambda) {
  require(sig.m >= 2 * sig.n, Status::InvalidArgument,
          "flat pairs need m >= 2n");
  const CMat x = random_cone_member(rng, sig.m, sig.n, lambda);
  const CMat z = orthocomplement_frame(rng, x);
  const double alpha = rng.uniform(-1.5, 1.5);
  const double eta = rng.log_uniform(0.2, 3.0);
  // X*Y = alpha lambda I (real), Y*Y = (alpha^2 lambda + eta) I.
  return {x, CMat(alpha * x + std::sqrt(eta) * z), Verdict::FlatSurface};
}

PlanePair make_mixed_reject_pair(CounterRng& rng, const Signature& sig,
                                 double lambda) {
  require(sig.m >= 2 * sig.n, Status::InvalidArgument,
          "mixed reject pairs need m >= 2n");
  const CMat x = random_cone_member(rng, sig.m, sig.n, lambda);
  const CMat z = orthocomplement_frame(rng, x);
  const double c = random_sign(rng) * rng.uniform(0.3, 2.0);
  const double eta = rng.log_uniform(0.2, 3.0);
  // X*Y = i c lambda I, yet iX stays outside the real span.
  return {x, CMat(cplx(0, c) * x + std::sqrt(eta) * z),
          Verdict::NotTotallyGeodesic};
}

PlanePair make_real_reject_pair(CounterRng& rng, const Signature& sig,
                                double lambda) {
  require(sig.n >= 2 && sig.m > sig.n, Status::InvalidArgument,
          "real reject pairs need n >= 2 and m > n");
  const CMat x = random_cone_member(rng, sig.m, sig.n, lambda);
  Eigen::HouseholderQR<CMat> xq(x);
  const CMat qx = xq.householderQ() * CMat::Identity(sig.m, sig.n);
  Eigen::VectorXcd w = random_gaussian(rng, sig.m, 1).col(0);
  w -= qx * (qx.adjoint() * w);
  w.normalize();
  const double eta = rng.log_uniform(0.2, 3.0);
  const double alpha = rng.uniform(-1.5, 1.5);
  // Perturbing one column keeps X*Y scalar but makes Y*Y non-scalar.
  CMat y = alpha * x;
  y.col(0) += std::sqrt(eta) * w;
  return {x, y, Verdict::NotTotallyGeodesic};
}

CMat fiber_closed_form(const CMat& x, double theta) {
  const Signature sig = make_signature(static_cast<int>(x.cols()),
                                       static_cast<int>(x.rows()));
  const ConeCheck cone = unitary_cone_check(x);
  require(cone.is_member, Status::NotInCone, "fiber element needs X in the cone");
  const cplx phase = std::exp(cplx(0, theta));
  const cplx conj_phase = std::exp(cplx(0, -theta));
  CMat out = CMat::Zero(sig.dim(), sig.dim());
  out.topLeftCorner(sig.n, sig.n) = phase * CMat::Identity(sig.n, sig.n);
  out.bottomRightCorner(sig.m, sig.m) =
      CMat::Identity(sig.m, sig.m) +
      ((conj_phase - 1.0) / cone.lambda) * (x * adjoint(x));
  return out;
}

}  // namespace hb

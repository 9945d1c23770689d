#include "matrix_ops.hpp"

#include <cmath>
#include <string>

namespace hb {

const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "Ok";
    case Status::ConfigError: return "ConfigError";
    case Status::DimensionMismatch: return "DimensionMismatch";
    case Status::NotFinite: return "NotFinite";
    case Status::SizeLimit: return "SizeLimit";
    case Status::NotInCone: return "NotInCone";
    case Status::PlaneDegenerate: return "PlaneDegenerate";
    case Status::StarViolated: return "StarViolated";
    case Status::NotTotallyGeodesic: return "NotTotallyGeodesic";
    case Status::NonSimpleCurve: return "NonSimpleCurve";
    case Status::NonClosedCurve: return "NonClosedCurve";
    case Status::NotStarShaped: return "NotStarShaped";
    case Status::QuadratureNotConverged: return "QuadratureNotConverged";
    case Status::BlockLeakage: return "BlockLeakage";
    case Status::LawToleranceExceeded: return "LawToleranceExceeded";
    case Status::SelftestFailed: return "SelftestFailed";
    case Status::InvalidArgument: return "InvalidArgument";
    case Status::Internal: return "Internal";
  }
  return "Unknown";
}

int exit_class(Status s) {
  switch (s) {
    case Status::Ok:
      return 0;
    case Status::ConfigError:
    case Status::SizeLimit:
    case Status::InvalidArgument:
      return 1;
    case Status::DimensionMismatch:
    case Status::NotFinite:
    case Status::NotInCone:
    case Status::PlaneDegenerate:
    case Status::StarViolated:
    case Status::NotTotallyGeodesic:
    case Status::NonSimpleCurve:
    case Status::NonClosedCurve:
    case Status::NotStarShaped:
      return 2;
    default:
      return 3;
  }
}

Signature make_signature(int n, int m) {
  require(n >= 1 && m >= 1, Status::ConfigError, "signature requires n >= 1 and m >= 1");
  require(n + m <= kMaxDim, Status::SizeLimit,
          "n + m = " + std::to_string(n + m) + " exceeds the supported limit " +
              std::to_string(kMaxDim));
  return Signature{n, m};
}

bool all_finite(const CMat& a) { return a.allFinite(); }

CMat adjoint(const CMat& a) { return a.adjoint(); }

CMat lambda_matrix(const Signature& sig) {
  CMat l = CMat::Identity(sig.dim(), sig.dim());
  l.topLeftCorner(sig.n, sig.n) *= -1.0;
  return l;
}

cplx hermitian_form(const Signature& sig, const CMat& v, const CMat& w) {
  require(v.rows() == sig.dim() && v.cols() == 1 && w.rows() == sig.dim() && w.cols() == 1,
          Status::DimensionMismatch, "hermitian_form expects (n+m)-component columns");
  cplx s = 0.0;
  for (int k = 0; k < sig.n; ++k) s -= std::conj(v(k, 0)) * w(k, 0);
  for (int k = sig.n; k < sig.dim(); ++k) s += std::conj(v(k, 0)) * w(k, 0);
  return s;
}

double inner_product(const CMat& a, const CMat& b) {
  require(a.rows() == a.cols() && a.rows() == b.rows() && a.cols() == b.cols(),
          Status::DimensionMismatch, "inner_product expects equal square matrices");
  return 0.5 * (a.adjoint() * b).trace().real();
}

double frobenius(const CMat& a) { return a.norm(); }

double pseudo_unitarity_residual(const Signature& sig, const CMat& g) {
  require(g.rows() == sig.dim() && g.cols() == sig.dim(), Status::DimensionMismatch,
          "pseudo_unitarity_residual expects an (n+m) x (n+m) matrix");
  CMat l = lambda_matrix(sig);
  return (g.adjoint() * l * g - l).norm();
}

CMat group_inverse(const Signature& sig, const CMat& g) {
  CMat l = lambda_matrix(sig);
  return l * g.adjoint() * l;
}

namespace {

double one_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Degree-13 Pade coefficients.
constexpr double kPade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

}  // namespace

CMat expm(const CMat& a) {
  require(a.rows() == a.cols(), Status::DimensionMismatch, "expm expects a square matrix");
  require(all_finite(a), Status::NotFinite, "expm input has non-finite entries");

  const int k = static_cast<int>(a.rows());
  const double nrm = one_norm(a);
  int squarings = 0;
  if (nrm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  CMat as = a / std::pow(2.0, squarings);

  CMat a2 = as * as;
  CMat a4 = a2 * a2;
  CMat a6 = a2 * a4;
  CMat id = CMat::Identity(k, k);

  CMat u = as * (a6 * (kPade13[13] * a6 + kPade13[11] * a4 + kPade13[9] * a2) +
                 kPade13[7] * a6 + kPade13[5] * a4 + kPade13[3] * a2 + kPade13[1] * id);
  CMat v = a6 * (kPade13[12] * a6 + kPade13[10] * a4 + kPade13[8] * a2) + kPade13[6] * a6 +
           kPade13[4] * a4 + kPade13[2] * a2 + kPade13[0] * id;

  CMat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

std::pair<CMat, CMat> expm_with_frechet(const CMat& a, const CMat& e) {
  require(a.rows() == a.cols() && e.rows() == e.cols() && a.rows() == e.rows(),
          Status::DimensionMismatch, "expm_frechet expects square matrices of equal size");
  const int k = static_cast<int>(a.rows());
  CMat blk = CMat::Zero(2 * k, 2 * k);
  blk.topLeftCorner(k, k) = a;
  blk.bottomRightCorner(k, k) = a;
  blk.topRightCorner(k, k) = e;
  CMat x = expm(blk);
  return {x.topLeftCorner(k, k), x.topRightCorner(k, k)};
}

CMat expm_frechet(const CMat& a, const CMat& e) { return expm_with_frechet(a, e).second; }

}  // namespace hb

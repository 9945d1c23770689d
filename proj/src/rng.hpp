#pragma once

#include <cmath>
#include <cstdint>

#include "matrix_ops.hpp"

namespace hb {

// Counter-based generator: each draw is a stateless mix of (seed, counter),
// so identical seeds reproduce identical streams on every platform. The mix
// is the splitmix64 finalizer.
struct CounterRng {
  std::uint64_t base = 0;
  std::uint64_t counter = 0;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * ++counter;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

  // Box-Muller; 1 - u stays in (0, 1], so the log is finite.
  double gaussian() {
    double u = uniform();
    double v = uniform();
    return std::sqrt(-2.0 * std::log1p(-u)) * std::cos(2.0 * M_PI * v);
  }

  cplx cgaussian() { return {gaussian(), gaussian()}; }
};

inline CMat random_gaussian(CounterRng& rng, int rows, int cols) {
  CMat a(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a(r, c) = rng.cgaussian();
  return a;
}

// Random member of the cone { X : X*X = lambda I_n }: orthonormalize an
// m x n Gaussian column-wise, then scale by sqrt(lambda). Requires m >= n.
inline CMat random_cone_member(CounterRng& rng, int m, int n, double lambda) {
  require(m >= n, Status::InvalidArgument, "cone members need m >= n");
  require(lambda > 0.0, Status::InvalidArgument, "cone members need lambda > 0");
  CMat g = random_gaussian(rng, m, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(m, n);
  return std::sqrt(lambda) * q;
}

// Random element of the algebra: anti-Hermitian diagonal blocks plus a free
// off-diagonal block, rescaled to the requested Frobenius norm.
inline CMat random_algebra_element(CounterRng& rng, const Signature& sig, double norm) {
  CMat a11 = random_gaussian(rng, sig.n, sig.n);
  CMat a22 = random_gaussian(rng, sig.m, sig.m);
  CMat b = random_gaussian(rng, sig.m, sig.n);
  CMat a = CMat::Zero(sig.dim(), sig.dim());
  a.topLeftCorner(sig.n, sig.n) = 0.5 * (a11 - a11.adjoint());
  a.bottomRightCorner(sig.m, sig.m) = 0.5 * (a22 - a22.adjoint());
  a.bottomLeftCorner(sig.m, sig.n) = b;
  a.topRightCorner(sig.n, sig.m) = b.adjoint();
  double f = a.norm();
  if (f > 0) a *= norm / f;
  return a;
}

}  // namespace hb

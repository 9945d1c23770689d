#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "errors.hpp"

namespace hb {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;

// Dimensions are capped at n + m = 16; larger inputs are rejected at the
// construction boundaries (configs, charts, C API).
inline constexpr int kMaxDim = 16;

// Signature (n, m) of the indefinite Hermitian form diag(-I_n, I_m).
struct Signature {
  int n = 1;
  int m = 1;
  int dim() const { return n + m; }
};

Signature make_signature(int n, int m);

bool all_finite(const CMat& a);

CMat adjoint(const CMat& a);

// diag(-I_n, I_m); squares to the identity.
CMat lambda_matrix(const Signature& sig);

// v* diag(-I_n, I_m) w for (n+m)-component column vectors.
cplx hermitian_form(const Signature& sig, const CMat& v, const CMat& w);

// (1/2) Re tr(a* b), the left-invariant metric on the matrix algebra.
double inner_product(const CMat& a, const CMat& b);

double frobenius(const CMat& a);

// || g* L g - L ||_F with L = lambda_matrix(sig); zero iff g preserves the form.
double pseudo_unitarity_residual(const Signature& sig, const CMat& g);

// Inverse of a form-preserving g: L g* L.
CMat group_inverse(const Signature& sig, const CMat& g);

// Matrix exponential, scaling-and-squaring with the degree-13 Pade approximant
// (Higham 2005).
CMat expm(const CMat& a);

// Directional derivative D exp(a)[e] via the block embedding
// exp([[a, e], [0, a]]) = [[exp(a), D], [0, exp(a)]].
CMat expm_frechet(const CMat& a, const CMat& e);

// {exp(a), D exp(a)[e]} from a single block exponential.
std::pair<CMat, CMat> expm_with_frechet(const CMat& a, const CMat& e);

}  // namespace hb

#pragma once

#include <optional>
#include <string>
#include <utility>

#include "matrix_ops.hpp"

namespace hb {

// Membership tolerances. Scalar-matrix and span residuals sit two orders
// above double noise at dim <= 16; the closure threshold is looser because
// it compounds three products.
inline constexpr double kScalarTol = 1e-10;
inline constexpr double kSpanTol = 1e-10;
inline constexpr double kClosureTol = 1e-8;
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kLambdaMin = 1e-12;

// An (n+m) x (n+m) matrix a with a* L + L a = 0, L = diag(-I_n, I_m).
struct AlgebraElement {
  Signature sig;
  CMat mat;
};

// Checked constructor; verifies the defining relation.
AlgebraElement algebra_element(const Signature& sig, const CMat& mat);

double algebra_residual(const Signature& sig, const CMat& mat);

// Hat embedding of an m x n matrix as [[0, X*], [X, 0]].
AlgebraElement hat(const Signature& sig, const CMat& x);

// Raw block versions used on hot paths. proj_h keeps the diagonal blocks
// (skew-projected), proj_m the off-diagonal blocks (Hermitian-averaged).
CMat proj_h(const Signature& sig, const CMat& a);
CMat proj_m(const Signature& sig, const CMat& a);

// Splits into the diagonal-block part and the off-diagonal part; the two are
// orthogonal under the trace metric.
std::pair<AlgebraElement, AlgebraElement> decompose(const AlgebraElement& a);

struct ConeCheck {
  bool is_member = false;
  double lambda = 0.0;
  double residual = 0.0;
};

// Tests X*X = lambda I_n with lambda the mean diagonal entry of X*X.
// Failure is a verdict, not an error.
ConeCheck unitary_cone_check(const CMat& x);

struct MuExtract {
  bool is_scalar = false;
  cplx mu = 0.0;
  double residual = 0.0;
};

// Tests X*Y = mu I_n with mu the mean diagonal entry of X*Y.
MuExtract mu_extract(const CMat& x, const CMat& y);

// [[a, b], c] with [p, q] = pq - qp.
AlgebraElement triple_bracket(const AlgebraElement& a, const AlgebraElement& b,
                              const AlgebraElement& c);

// Column-wise formula for the matrix Z with hat(Z) = [[hat(X), hat(Y)], hat(X)]:
//   Z[r][k] = sum_j X[r][j] (2 h(Y_j, X_k) - h(X_j, Y_k)) - sum_j Y[r][j] h(X_j, X_k)
// where h(u, v) = u* v on columns. Independent route from triple_bracket.
CMat lemma_calculation_formula(const CMat& x, const CMat& y);

enum class Verdict { NotTotallyGeodesic, FlatSurface, ComplexSurface };

const char* verdict_name(Verdict v);

struct PlaneClassification {
  Verdict verdict = Verdict::NotTotallyGeodesic;
  std::optional<cplx> mu;
  std::optional<double> lambda;
  double closure_residual = 0.0;
  std::string witnesses;
};

// Least-squares coefficients and relative residual of t ~ s b1 + u b2 over
// the reals (matrices treated as real vectors).
struct SpanFit {
  double s = 0.0;
  double t = 0.0;
  double residual = 0.0;
};

SpanFit real_span_fit(const CMat& target, const CMat& b1, const CMat& b2);

// Max relative residual of [[hat(X),hat(Y)],hat(X)] and [[hat(Y),hat(X)],hat(Y)]
// against span_R{hat(X), hat(Y)}; the brute-force closure test.
double closure_residual(const CMat& x, const CMat& y);

// Verdict for the 2-plane span_R{hat(X), hat(Y)}. Requires X in the cone,
// a genuinely 2-dimensional real span, and scalar X*Y; violations raise
// NotInCone / PlaneDegenerate / StarViolated.
PlaneClassification classify_plane(const CMat& x, const CMat& y);

// diag(-i lambda I_n, i X X*); satisfies [hat(X), hat(iX)] = -2K.
AlgebraElement k_matrix(const CMat& x);

// Orthonormal basis of the 2x2 trace-free algebra used by the embedding.
CMat su11_e1();
CMat su11_e2();
CMat su11_e3();

// f(a E1 + b E2 + c E3) = (a/sqrt(l)) hat(X) + (b/sqrt(l)) hat(iX) + (c/l) K.
// Bracket-preserving; scales norms by sqrt(n).
AlgebraElement su11_embed(const CMat& x, double a, double b, double c);

// diag(e^{i t} I_n, I_m + ((e^{-i t} - 1)/lambda) X X*); the closed form of
// exp(-(t/lambda) K).
CMat fiber_closed_form(const CMat& x, double theta);

struct PlanePair {
  CMat x, y;
  Verdict expected;
};

struct CounterRng;

// Engineered generator pairs with known verdicts, for randomized checks.
// Complex pairs work at any signature; the others need room in the second
// factor: flat and mixed-reject need m >= 2n, real-reject needs n >= 2 and
// m > n.
PlanePair make_complex_pair(CounterRng& rng, const Signature& sig, double lambda);
PlanePair make_flat_pair(CounterRng& rng, const Signature& sig, double lambda);
PlanePair make_mixed_reject_pair(CounterRng& rng, const Signature& sig, double lambda);
PlanePair make_real_reject_pair(CounterRng& rng, const Signature& sig, double lambda);

}  // namespace hb

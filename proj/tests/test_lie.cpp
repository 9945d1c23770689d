#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lie.hpp"
#include "matrix_ops.hpp"
#include "rng.hpp"

using namespace hb;

namespace {

CMat bracket(const CMat& a, const CMat& b) { return a * b - b * a; }

Signature sig_of(const CMat& x) {
  return make_signature(static_cast<int>(x.cols()), static_cast<int>(x.rows()));
}

}  // namespace

TEST_CASE("hat embedding lands in the algebra") {
  CounterRng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Signature sig = make_signature(1 + static_cast<int>(rng.next_u64() % 3),
                                         1 + static_cast<int>(rng.next_u64() % 4));
    const CMat x = random_gaussian(rng, sig.m, sig.n);
    const AlgebraElement hx = hat(sig, x);
    CHECK(algebra_residual(sig, hx.mat) < 1e-14);
    CHECK((hx.mat - adjoint(hx.mat)).norm() < 1e-14);  // hat(X) is Hermitian
    // Round trip through the block layout.
    CHECK((hx.mat.bottomLeftCorner(sig.m, sig.n) - x).norm() == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(hat(make_signature(2, 3), CMat::Zero(2, 3)), Error);
}

TEST_CASE("decomposition is orthogonal and splits the algebra") {
  CounterRng rng(103);
  for (int trial = 0; trial < 20; ++trial) {
    const Signature sig = make_signature(2, 3);
    const CMat a = random_algebra_element(rng, sig, 2.0);
    const AlgebraElement el = algebra_element(sig, a);
    const auto [h, m] = decompose(el);
    CHECK((h.mat + m.mat - a).norm() < 1e-14);
    CHECK(std::abs(inner_product(h.mat, m.mat)) < 1e-14);
    CHECK(algebra_residual(sig, h.mat) < 1e-13);
    CHECK(algebra_residual(sig, m.mat) < 1e-13);
    // Diagonal-block part brackets back into itself.
    const CMat hh = bracket(h.mat, h.mat);
    CHECK(hh.norm() < 1e-14);
    CHECK(proj_m(sig, bracket(h.mat, m.mat)).norm() ==
          doctest::Approx(bracket(h.mat, m.mat).norm()));
  }
}

TEST_CASE("cone membership detector") {
  CounterRng rng(107);
  const CMat x = random_cone_member(rng, 4, 2, 1.7);
  const ConeCheck good = unitary_cone_check(x);
  CHECK(good.is_member);
  CHECK(good.lambda == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(good.residual < 1e-12);

  CMat bad = x;
  bad(0, 0) += 0.05;
  CHECK_FALSE(unitary_cone_check(bad).is_member);
  CHECK_FALSE(unitary_cone_check(CMat::Zero(4, 2)).is_member);  // lambda = 0

  // Column scaling breaks the scalar property for n >= 2.
  CMat scaled = x;
  scaled.col(0) *= 2.0;
  CHECK_FALSE(unitary_cone_check(scaled).is_member);
}

TEST_CASE("scalar pairing detector") {
  CounterRng rng(109);
  const CMat x = random_cone_member(rng, 5, 2, 1.0);
  const MuExtract same = mu_extract(x, CMat(cplx(0.4, -1.1) * x));
  CHECK(same.is_scalar);
  CHECK(same.mu.real() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(same.mu.imag() == doctest::Approx(-1.1).epsilon(1e-12));

  const CMat noise = random_gaussian(rng, 5, 2);
  CHECK_FALSE(mu_extract(x, CMat(x + 0.3 * noise)).is_scalar);
}

TEST_CASE("triple bracket agrees with the column-sum formula") {
  CounterRng rng(113);
  const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {2, 2}, {3, 2}, {4, 3}};
  for (auto [m, n] : shapes) {
    const Signature sig = make_signature(n, m);
    for (int trial = 0; trial < 50; ++trial) {
      // Unconditional identity: no cone or pairing assumptions.
      const CMat x = random_gaussian(rng, m, n);
      const CMat y = random_gaussian(rng, m, n);
      const AlgebraElement lhs = triple_bracket(hat(sig, x), hat(sig, y), hat(sig, x));
      const CMat z = lemma_calculation_formula(x, y);
      const CMat rhs = hat(sig, z).mat;
      CHECK((lhs.mat - rhs).norm() < 1e-11 * (1.0 + rhs.norm()));
      // The result stays in the off-diagonal summand.
      CHECK((proj_m(sig, lhs.mat) - lhs.mat).norm() < 1e-12 * (1.0 + lhs.mat.norm()));
    }
  }
}

TEST_CASE("curvature midpoint identities") {
  CounterRng rng(127);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const int m = n + static_cast<int>(rng.next_u64() % 3);
    const double lambda = rng.log_uniform(0.2, 5.0);
    const CMat x = random_cone_member(rng, m, n, lambda);
    const Signature sig = sig_of(x);

    const CMat hx = hat(sig, x).mat;
    const CMat hix = hat(sig, CMat(cplx(0, 1) * x)).mat;
    const CMat k = k_matrix(x).mat;

    CHECK((bracket(hx, hix) + 2.0 * k).norm() < 1e-12 * (1.0 + k.norm()));
    CHECK((bracket(k, hx) - 2.0 * lambda * hix).norm() < 1e-11 * (1.0 + hix.norm()));
    CHECK((bracket(k, hix) + 2.0 * lambda * hx).norm() < 1e-11 * (1.0 + hx.norm()));
    CHECK((bracket(bracket(hx, hix), hx) + 4.0 * lambda * hix).norm() <
          1e-11 * (1.0 + lambda));
    CHECK((bracket(bracket(hix, hx), hix) + 4.0 * lambda * hx).norm() <
          1e-11 * (1.0 + lambda));

    // Metric normalizations.
    CHECK(inner_product(hx, hx) == doctest::Approx(n * lambda).epsilon(1e-10));
    CHECK(inner_product(k, k) == doctest::Approx(n * lambda * lambda).epsilon(1e-10));
    CHECK(std::abs(inner_product(hx, hix)) < 1e-12 * n * lambda);
    CHECK(std::abs(inner_product(hx, k)) < 1e-12);
    CHECK(std::abs(inner_product(hix, k)) < 1e-12);
  }
}

TEST_CASE("rank-one model brackets") {
  const CMat e1 = su11_e1(), e2 = su11_e2(), e3 = su11_e3();
  CHECK((bracket(e1, e2) + 2.0 * e3).norm() < 1e-15);
  CHECK((bracket(e3, e1) - 2.0 * e2).norm() < 1e-15);
  CHECK((bracket(e3, e2) + 2.0 * e1).norm() < 1e-15);
  const Signature s11 = make_signature(1, 1);
  CHECK(algebra_residual(s11, e1) < 1e-15);
  CHECK(algebra_residual(s11, e2) < 1e-15);
  CHECK(algebra_residual(s11, e3) < 1e-15);
}

TEST_CASE("embedding preserves brackets and scales norms by sqrt(n)") {
  CounterRng rng(131);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 3);
    const int m = n + static_cast<int>(rng.next_u64() % 3);
    const double lambda = rng.log_uniform(0.2, 5.0);
    const CMat x = random_cone_member(rng, m, n, lambda);

    const double a1 = rng.uniform(-2, 2), b1 = rng.uniform(-2, 2), c1 = rng.uniform(-2, 2);
    const double a2 = rng.uniform(-2, 2), b2 = rng.uniform(-2, 2), c2 = rng.uniform(-2, 2);
    const CMat u = a1 * su11_e1() + b1 * su11_e2() + c1 * su11_e3();
    const CMat v = a2 * su11_e1() + b2 * su11_e2() + c2 * su11_e3();
    const CMat fu = su11_embed(x, a1, b1, c1).mat;
    const CMat fv = su11_embed(x, a2, b2, c2).mat;

    // [u, v] in the model, pushed through f, against [f(u), f(v)].
    const CMat w = bracket(u, v);
    // Coefficients of w in the E basis via the orthonormal metric.
    const double wa = inner_product(su11_e1(), w);
    const double wb = inner_product(su11_e2(), w);
    const double wc = inner_product(su11_e3(), w);
    const CMat fw = su11_embed(x, wa, wb, wc).mat;
    CHECK((fw - bracket(fu, fv)).norm() < 1e-10 * (1.0 + fw.norm()));

    // Conformality with exact factor sqrt(n).
    const double model = std::sqrt(inner_product(u, u));
    const double image = std::sqrt(inner_product(fu, fu));
    CHECK(image == doctest::Approx(std::sqrt(n) * model).epsilon(1e-12));
  }
}

TEST_CASE("fiber closed form is the exponential of the vertical generator") {
  CounterRng rng(137);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng.next_u64() % 2);
    const int m = n + static_cast<int>(rng.next_u64() % 3);
    const double lambda = rng.log_uniform(0.3, 4.0);
    const CMat x = random_cone_member(rng, m, n, lambda);
    const Signature sig = sig_of(x);
    const CMat k = k_matrix(x).mat;
    for (double theta : {0.0, 0.4, 2.0, 3.9, 7.1}) {
      const CMat closed = fiber_closed_form(x, theta);
      const CMat viaexp = expm(CMat(-(theta / lambda) * k));
      CHECK((closed - viaexp).norm() < 1e-12 * (1.0 + closed.norm()));
      CHECK(pseudo_unitarity_residual(sig, closed) < 1e-12);
    }
    // One-parameter homomorphism.
    const CMat a = fiber_closed_form(x, 0.7);
    const CMat b = fiber_closed_form(x, 1.9);
    CHECK((a * b - fiber_closed_form(x, 2.6)).norm() < 1e-12);
    // Full period.
    CHECK((fiber_closed_form(x, 2.0 * M_PI) - CMat::Identity(sig.dim(), sig.dim()))
              .norm() < 1e-12);
  }
}

TEST_CASE("classifier on engineered pairs") {
  CounterRng rng(139);
  const Signature sigs_any[] = {make_signature(1, 1), make_signature(1, 3),
                                make_signature(2, 2), make_signature(3, 4)};
  const Signature sigs_wide[] = {make_signature(1, 2), make_signature(1, 4),
                                 make_signature(2, 4), make_signature(2, 5)};
  const Signature sigs_tall[] = {make_signature(2, 3), make_signature(3, 4),
                                 make_signature(2, 4)};

  for (int trial = 0; trial < 30; ++trial) {
    const double lambda = rng.log_uniform(0.3, 3.0);
    {
      const auto& sig = sigs_any[rng.next_u64() % 4];
      const PlanePair p = make_complex_pair(rng, sig, lambda);
      const PlaneClassification c = classify_plane(p.x, p.y);
      CHECK(c.verdict == Verdict::ComplexSurface);
      CHECK(c.closure_residual < kClosureTol);
      CHECK(std::abs(*c.lambda - lambda) < 1e-10 * (1.0 + lambda));
      CHECK(std::abs(c.mu->imag()) > kScalarTol);
    }
    {
      const auto& sig = sigs_wide[rng.next_u64() % 4];
      const PlanePair p = make_flat_pair(rng, sig, lambda);
      const PlaneClassification c = classify_plane(p.x, p.y);
      CHECK(c.verdict == Verdict::FlatSurface);
      CHECK(c.closure_residual < kClosureTol);
      CHECK(std::abs(c.mu->imag()) < kScalarTol * (1.0 + std::abs(*c.mu)));
    }
    {
      const auto& sig = sigs_wide[rng.next_u64() % 4];
      const PlanePair p = make_mixed_reject_pair(rng, sig, lambda);
      const PlaneClassification c = classify_plane(p.x, p.y);
      CHECK(c.verdict == Verdict::NotTotallyGeodesic);
      CHECK(c.closure_residual > kClosureTol);
    }
    {
      const auto& sig = sigs_tall[rng.next_u64() % 3];
      const PlanePair p = make_real_reject_pair(rng, sig, lambda);
      const PlaneClassification c = classify_plane(p.x, p.y);
      CHECK(c.verdict == Verdict::NotTotallyGeodesic);
      CHECK(c.closure_residual > kClosureTol);
    }
  }
}

TEST_CASE("classifier verdict equals brute-force span closure") {
  // The independent oracle: a plane is closed under both triple brackets
  // exactly when the verdict is flat or complex.
  CounterRng rng(149);
  int agreements = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double lambda = rng.log_uniform(0.3, 3.0);
    PlanePair pairs[] = {
        make_complex_pair(rng, make_signature(2, 3), lambda),
        make_flat_pair(rng, make_signature(2, 4), lambda),
        make_mixed_reject_pair(rng, make_signature(1, 3), lambda),
        make_real_reject_pair(rng, make_signature(2, 4), lambda),
    };
    for (const PlanePair& p : pairs) {
      const PlaneClassification c = classify_plane(p.x, p.y);
      const bool closed = closure_residual(p.x, p.y) <= kClosureTol;
      const bool geodesic = c.verdict != Verdict::NotTotallyGeodesic;
      CHECK(closed == geodesic);
      CHECK(c.verdict == p.expected);
      ++agreements;
    }
  }
  CHECK(agreements == 200);
}

TEST_CASE("classifier rejects malformed input") {
  CounterRng rng(151);
  const CMat x = random_cone_member(rng, 3, 2, 1.0);
  const CMat y = random_gaussian(rng, 3, 2);

  // X off the cone.
  CMat off = x;
  off(0, 0) += 0.2;
  CHECK_THROWS_AS(classify_plane(off, y), Error);
  try {
    classify_plane(off, y);
  } catch (const Error& e) {
    CHECK(e.status() == Status::NotInCone);
  }

  // Degenerate span.
  try {
    classify_plane(x, CMat(2.5 * x));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.status() == Status::PlaneDegenerate);
  }

  // Non-scalar pairing.
  try {
    classify_plane(x, CMat(x + 0.4 * random_gaussian(rng, 3, 2)));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.status() == Status::StarViolated);
  }
}

TEST_CASE("rank-deficient second factor forces real multiples only") {
  // At n = m every scalar pairing collapses: X spans the whole column space,
  // so Y = (mu/lambda) X. A complex multiple still classifies.
  CounterRng rng(157);
  const CMat x = random_cone_member(rng, 2, 2, 1.3);
  const PlaneClassification c = classify_plane(x, CMat(cplx(0.2, 0.9) * x));
  CHECK(c.verdict == Verdict::ComplexSurface);
}

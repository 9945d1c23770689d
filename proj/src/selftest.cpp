#include "selftest.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lie.hpp"
#include "rng.hpp"

namespace hb {

namespace {

SuiteResult column_formula_suite(std::uint64_t seed, int trials) {
  SuiteResult res{"bracket-column-formula", 0, 0, 0.0, 1e-11};
  CounterRng rng(seed, 101);
  const std::array<Signature, 4> shapes{{{1, 2}, {2, 2}, {2, 3}, {3, 4}}};
  for (int t = 0; t < trials; ++t)
    for (const Signature& sig : shapes) {
      const CMat x = random_gaussian(rng, sig.m, sig.n);
      const CMat y = random_gaussian(rng, sig.m, sig.n);
      const AlgebraElement direct = triple_bracket(hat(sig, x), hat(sig, y), hat(sig, x));
      const CMat z = lemma_calculation_formula(x, y);
      const double err = frobenius(hat(sig, z).mat - direct.mat) /
                         std::max(1.0, frobenius(direct.mat));
      res.worst = std::max(res.worst, err);
      res.failures += err > res.tolerance;
      ++res.trials;
    }
  return res;
}

SuiteResult fiber_form_suite(std::uint64_t seed, int trials) {
  SuiteResult res{"fiber-closed-form", 0, 0, 0.0, 1e-10};
  CounterRng rng(seed, 102);
  const std::array<Signature, 4> sigs{{{1, 1}, {1, 2}, {2, 2}, {2, 3}}};
  for (int t = 0; t < trials; ++t) {
    const Signature sig = sigs[t % sigs.size()];
    const double lambda = rng.log_uniform(0.25, 4.0);
    const CMat x = random_cone_member(rng, sig.m, sig.n, lambda);
    const AlgebraElement k = k_matrix(x);
    double err = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double theta = 4.0 * M_PI * (i + rng.uniform()) / 8.0;
      err = std::max(err, frobenius(fiber_closed_form(x, theta) -
                                    expm(-(theta / lambda) * k.mat)));
    }
    const double t1 = rng.uniform(0.0, 2.0 * M_PI);
    const double t2 = rng.uniform(0.0, 2.0 * M_PI);
    err = std::max(err, frobenius(fiber_closed_form(x, t1) * fiber_closed_form(x, t2) -
                                  fiber_closed_form(x, t1 + t2)));
    res.worst = std::max(res.worst, err);
    res.failures += err > res.tolerance;
    ++res.trials;
  }
  return res;
}

SuiteResult conformality_suite(std::uint64_t seed, int trials) {
  SuiteResult res{"conformal-embedding", 0, 0, 0.0, 1e-12};
  CounterRng rng(seed, 103);
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + t % 3;
    const int m = n + t % 2;
    const double lambda = rng.log_uniform(0.25, 4.0);
    const CMat x = random_cone_member(rng, m, n, lambda);
    const double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian();
    const double vnorm = std::sqrt(a * a + b * b + c * c);
    const AlgebraElement f = su11_embed(x, a, b, c);
    const double fnorm = std::sqrt(inner_product(f.mat, f.mat));
    const double err = std::abs(fnorm - std::sqrt(double(n)) * vnorm) /
                       std::max(vnorm, 1e-12);
    res.worst = std::max(res.worst, err);
    res.failures += err > res.tolerance;
    ++res.trials;
  }
  return res;
}

SuiteResult classifier_agreement_suite(std::uint64_t seed, int trials) {
  SuiteResult res{"classifier-closure-agreement", 0, 0, 0.0, kClosureTol};
  CounterRng rng(seed, 104);
  for (int t = 0; t < trials; ++t) {
    const double lambda = rng.log_uniform(0.5, 2.0);
    PlanePair pair;
    switch (t % 4) {
      case 0: pair = make_complex_pair(rng, {1 + t % 3, 1 + t % 3 + t % 2}, lambda); break;
      case 1: pair = make_flat_pair(rng, {1 + t % 2, 4}, lambda); break;
      case 2: pair = make_mixed_reject_pair(rng, {1 + t % 2, 4 + t % 2}, lambda); break;
      default: pair = make_real_reject_pair(rng, {2 + t % 2, 4}, lambda); break;
    }
    const PlaneClassification cls = classify_plane(pair.x, pair.y);
    const double closure = closure_residual(pair.x, pair.y);
    const bool closed = closure <= kClosureTol;
    const bool geodesic = cls.verdict != Verdict::NotTotallyGeodesic;
    if (geodesic) res.worst = std::max(res.worst, closure);
    res.failures += (closed != geodesic) || (cls.verdict != pair.expected);
    ++res.trials;
  }
  return res;
}

}  // namespace

std::vector<SuiteResult> run_selftest(std::uint64_t seed, int trials) {
  require(trials >= 0, Status::ConfigError, "selftest trials must be >= 0");
  return {column_formula_suite(seed, trials), fiber_form_suite(seed, trials),
          conformality_suite(seed, trials), classifier_agreement_suite(seed, trials)};
}

bool selftest_passed(const std::vector<SuiteResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const SuiteResult& r) { return r.passed(); });
}

std::string selftest_text(const std::vector<SuiteResult>& results, int trials) {
  std::string out;
  for (const SuiteResult& r : results) {
    out += r.passed() ? "[pass] " : "[FAIL] ";
    out += r.name + ": trials=" + std::to_string(r.trials) +
           " failures=" + std::to_string(r.failures) +
           " worst=" + format_number(r.worst) +
           " tol=" + format_number(r.tolerance) + "\n";
  }
  if (trials == 0)
    out += "warning: 0 trials requested; suites pass vacuously\n";
  out += selftest_passed(results) ? "selftest: all suites passed\n"
                                  : "selftest: FAILED\n";
  return out;
}

json selftest_to_json(const std::vector<SuiteResult>& results, int trials) {
  json suites = json::array();
  for (const SuiteResult& r : results)
    suites.push_back({{"name", r.name},
                      {"trials", r.trials},
                      {"failures", r.failures},
                      {"worst", r.worst},
                      {"tolerance", r.tolerance},
                      {"passed", r.passed()}});
  return json{{"suites", std::move(suites)},
              {"requested_trials", trials},
              {"vacuous", trials == 0},
              {"passed", selftest_passed(results)}};
}

}  // namespace hb

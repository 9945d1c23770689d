#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "serialize.hpp"

namespace hb {

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;  // worst residual observed across trials
  double tolerance = 0.0;
  bool passed() const { return failures == 0; }
};

// Randomized invariant suites: the commutator column formula, the fiber
// closed form, embedding conformality, and classifier-vs-closure agreement.
// All randomness flows from the seed; trials = 0 is a vacuous pass.
std::vector<SuiteResult> run_selftest(std::uint64_t seed, int trials);

bool selftest_passed(const std::vector<SuiteResult>& results);

std::string selftest_text(const std::vector<SuiteResult>& results, int trials);

json selftest_to_json(const std::vector<SuiteResult>& results, int trials);

}  // namespace hb

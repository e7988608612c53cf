#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pam/rng.hpp"

namespace pam {

inline constexpr int kCriterionCount = 10;

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  bool parallel = true;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  /// Wall-clock limit; exceeding it fails the criterion.
  double budget_seconds = 0.0;
  /// Measured quantities, one "key=value" item per entry.
  std::vector<std::string> detail;
};

const char* criterion_name(int id);

/// Runs one criterion (1..10). Numerical errors are caught and reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// Runs the listed criteria in order (all when `ids` is empty).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {}, std::vector<int> ids = {});

}  // namespace pam

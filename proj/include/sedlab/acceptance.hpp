#pragma once

#include <string>
#include <vector>

namespace sedlab::acceptance {

struct Check {
  std::string label;
  bool pass = false;
  std::string detail;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double runtime = 0.0;

  bool pass() const;
  /// One line: "criterion N <title>: PASS|FAIL | check details".
  std::string line() const;
};

inline constexpr int kCriterionCount = 9;

/// Runs one criterion (1..9) at the default scenario configurations.
CriterionResult run_criterion(int id, unsigned jobs);

/// Runs the listed criteria, or all of them when `ids` is empty.
std::vector<CriterionResult> run_all(unsigned jobs, const std::vector<int>& ids = {});

}  // namespace sedlab::acceptance

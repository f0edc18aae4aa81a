// Acceptance suite: one runner per criterion, shared between the test binary
// and the CLI selftest subcommand.

#pragma once

#include <string>
#include <vector>

namespace hca::selfcheck {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // includes reported (non-asserted) comparisons
  double seconds = 0;
};

std::vector<CriterionResult> run_all();

// "PASS  3  grading (0.12 s)  <detail>" style lines, one per criterion.
std::string format_table(const std::vector<CriterionResult>& results);

}  // namespace hca::selfcheck

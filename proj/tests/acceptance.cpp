// Acceptance gate: runs every criterion and prints one pass/fail line each.

#include <cstdio>
#include <iostream>

#include "hca/selfcheck.hpp"

int main() {
  auto results = hca::selfcheck::run_all();
  std::cout << hca::selfcheck::format_table(results);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  std::cout << (all ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
  return all ? 0 : 1;
}

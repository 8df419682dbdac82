#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfpilot {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double elapsed_s = 0.0;
  std::string detail;
};

struct ValidationOptions {
  bool quick = false;  // checks 1-5 only (no long Monte-Carlo experiments)
  int jobs = 0;        // 0: hardware concurrency
  std::uint64_t seed = 1;
};

// End-to-end validation suite: exact move algebra, solver optimality against
// exhaustive search, feasibility, rate-formula degeneracies, Monte-Carlo
// cross-checks, and the statistical behavior of the full pipeline.
std::vector<CheckResult> run_validation(const ValidationOptions& opt);

}  // namespace cfpilot

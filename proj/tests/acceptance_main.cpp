// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include <cstdio>

#include "cfpilot/validation.hpp"

int main() {
  cfpilot::ValidationOptions opt;
  opt.jobs = 0;
  opt.seed = 1;
  const std::vector<cfpilot::CheckResult> results = cfpilot::run_validation(opt);
  bool all = true;
  for (const cfpilot::CheckResult& r : results) {
    all = all && r.pass;
    std::printf("[%s] criterion %2d: %s | %s (%.1f s)\n", r.pass ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.detail.c_str(), r.elapsed_s);
    std::fflush(stdout);
  }
  std::printf("acceptance: %s (%zu criteria)\n", all ? "PASS" : "FAIL", results.size());
  return all ? 0 : 1;
}

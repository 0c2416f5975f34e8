#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gifsdim {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;  // wall-clock limit in seconds; exceeding it fails the check
};

struct AcceptanceOptions {
  // Residue mod 2 picking the 2-adic root of x^2 - 3x - 2 that plays lambda.
  // 1 takes the unit root, which must make the norm check fail.
  std::int64_t lambda_selector = 0;
  // Seed of the randomized suites.
  std::uint64_t seed = 20240917;
};

// The ten end-to-end checks, in order. A check that throws fails with the
// message as its detail.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt = {});
CheckResult run_check(int id, const AcceptanceOptions& opt = {});

// "criterion  N  PASS  name: detail  (t s)"
std::string format_result(const CheckResult& r);

}  // namespace gifsdim

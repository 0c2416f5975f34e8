// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <iostream>

#include "gifsdim/acceptance.hpp"

int main() {
  bool ok = true;
  for (const auto& r : gifsdim::run_acceptance()) {
    std::cout << gifsdim::format_result(r) << std::endl;
    ok = ok && r.pass;
  }
  std::cout << (ok ? "all criteria pass" : "some criteria FAIL") << std::endl;
  return ok ? 0 : 1;
}

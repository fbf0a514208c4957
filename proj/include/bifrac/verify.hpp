#pragma once

#include "bifrac/types.hpp"

#include <string>
#include <vector>

namespace bifrac {

struct CheckResult {
  std::string name;
  Real measured;
  Real tolerance;
  bool pass;
  std::string details;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass = true;
  double seconds = 0.0;
};

struct VerifyConfig {
  Index fock_dim = 32;
  Real window = 13.0;
  Index points = 261;
  Real theta1 = kPi / 3.0;
  Real theta2 = kPi / 5.0;
  unsigned seed = 20240817u;
  bool quick = false; // reduced battery sizes for fast unit-test runs
};

// Suite names accepted by run_suite; "all" is expanded by callers.
const std::vector<std::string>& suite_names();

SuiteReport run_suite(const std::string& name, const VerifyConfig& config);

} // namespace bifrac

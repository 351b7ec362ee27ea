#pragma once

#include "cpmod/instance.hpp"

namespace cpmod {

struct CheckResult {
  std::string name;
  std::string description;
  double max_residual = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = kDefaultTol;
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Runs the full randomized verification sweep: both bundled worked examples
/// plus property-based checks of every construction, one CheckResult per
/// acceptance check.
VerificationReport run_verification(std::uint64_t seed, int samples,
                                    double tol);

nlohmann::json report_to_json(const VerificationReport& report,
                              bool include_timing = true);

}  // namespace cpmod

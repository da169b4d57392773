// verify.hpp
// Self-contained consistency suite behind the `verify` subcommand: checks
// the algebraic identities, oracle agreement, Monte Carlo statistics, and
// region coverage on randomized inputs at two effort scales.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qtel {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass = false;
};

VerificationReport run_verification(std::uint64_t seed, bool full_scale);

// One line per check plus a summary; stable layout for log diffing.
std::string format_verification(const VerificationReport& report, std::uint64_t seed,
                                bool full_scale);

}  // namespace qtel

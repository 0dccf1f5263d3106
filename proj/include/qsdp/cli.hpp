#pragma once

// Command-line front end: generate, solve, estimate and verify.

#include <iosfwd>

namespace qsdp::cli {

enum ExitCode : int {
  kOk = 0,
  kMaxIters = 1,
  kConditionViolated = 2,
  kNumericalFailure = 3,
  kInitNotOnPath = 4,
  kMalformedInput = 64,
};

/// Parses argv and runs one subcommand. Documents go to files named by the
/// flags or to `out`; diagnostics and progress go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qsdp::cli

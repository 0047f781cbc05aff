#pragma once

// Command-line driver: cohomology, steenrod, verify, orthogonal and rewrite subcommands.

#include <ostream>

namespace steenrod::cli {

enum ExitCode : int {
    Pass = 0,
    VerificationFailed = 1,
    UsageError = 2,
    BudgetExceeded = 3,
};

/// Runs one job; the returned value is the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace steenrod::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spantri {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailed = 1,        // checked and failed
  kExitUsage = 2,         // bad arguments or unreadable input
  kExitInconclusive = 3,  // a budget stopped the check
};

/// Environment variable that overrides the default enumeration budget.
inline constexpr const char* kBudgetEnv = "SPANTRI_BUDGET";

/// Runs one subcommand. args excludes the program name. Human-readable
/// summaries go to `out`, errors to `err`; reports go to the paths given
/// by the options (or to `out` for the path "-").
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace spantri

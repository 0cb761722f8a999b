#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace torusvc {

/// Exit codes of `run`.
enum ExitCode : int { kExitOk = 0, kExitProperty = 1, kExitUsage = 2, kExitGuard = 3 };

/// Runs one subcommand; `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusvc

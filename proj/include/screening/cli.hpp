#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace screening::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kConfigError = 2, kRuntimeError = 3 };

/// Runs the command line `args` (without the program name), writing human
/// output to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace screening::cli

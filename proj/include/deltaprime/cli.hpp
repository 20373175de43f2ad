#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace deltaprime {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 2, kExitNumericalFailure = 3 };

/// Runs the command line `args` (program name excluded). Results go to `out`
/// in one write at the end; diagnostics and warnings go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace deltaprime

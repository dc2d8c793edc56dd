#pragma once

#include <ostream>

namespace swdelay::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kInputError = 1, kNegativeResult = 2 };

/// Runs the tool with the given arguments, writing reports to `out` and
/// diagnostics to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swdelay::cli

#pragma once

#include <iosfwd>

namespace hybridvar {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitValidation = 4 };

/// Runs the command line tool. Results go to `out`, the one-line JSON error
/// record to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridvar

#pragma once

// The command-line workflows: simulate, sweep, optimize, validate.
//
// Exit codes: 0 success, 2 invalid input or parameters, 3 numerical failure.

#include <iosfwd>

namespace fluxres {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 2, kExitNumerical = 3 };

/// Parses argv and runs the selected subcommand. Never throws; every error
/// is reported on `err` and mapped to an exit code.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace fluxres

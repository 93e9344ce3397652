#pragma once

#include <iosfwd>

namespace qdot::cli {

/// Exit codes of the qdot command.
enum ExitCode : int {
    exit_ok = 0,
    exit_reproduction_failure = 1,
    exit_usage = 2,
    exit_numerical = 3,
};

/// Parses argv and runs one subcommand. Regular output goes to `out`
/// (or to --output), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qdot::cli

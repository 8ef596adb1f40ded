#pragma once

#include <iosfwd>

namespace charsum::cli {

enum ExitCode : int {
    kSuccess = 0,
    kMismatch = 1,
    kUsage = 2,
    kWidthCap = 3,
    kIoError = 4,
};

/// Entry point for the `charsum` tool (subcommands eval, check, bench, grid).
/// Writes results to out and diagnostics to err; returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace charsum::cli

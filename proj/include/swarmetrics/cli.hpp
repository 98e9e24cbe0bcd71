#pragma once

#include <iosfwd>

namespace swarmetrics {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2 };

/// Entry point for `swarmetrics <sim|metrics|availability|sweep> ...`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace swarmetrics

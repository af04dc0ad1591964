#pragma once

namespace cvbell::cli {

enum ExitCode { kOk = 0, kValidationFailure = 1, kConfigError = 2, kNonConverged = 3 };

/// Parses argv, runs the subcommand, returns the process exit code.
int run(int argc, char** argv);

}  // namespace cvbell::cli

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmvs::cli {

/// Process exit codes.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kRuntimeFailure = 3,
};

/// Runs exactly one subcommand. `args[0]` is the program name. Errors are
/// reported as a single line on `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lmvs::cli

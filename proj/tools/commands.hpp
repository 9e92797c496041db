#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bksvm::cli {

enum ExitCode : int { ok = 0, usage = 1, data_error = 2, numeric_failure = 3 };

/// Parses `args` (without the program name) and runs the selected command.
/// Normal output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bksvm::cli

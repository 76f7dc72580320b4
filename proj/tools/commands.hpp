#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace betadt::cli {

enum ExitCode { kOk = 0, kStatisticalFailure = 1, kUsageError = 2 };

// Runs the command line `args` (without the program name). Regular output goes
// to `out`, diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace betadt::cli

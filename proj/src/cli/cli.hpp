#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cirng::cli {

enum ExitCode : int {
    kOk = 0,
    kTestFailed = 1,
    kUsageError = 2,
    kIoError = 3,
    kInsufficientData = 4,
};

// Runs the command line `args` (without the program name). Binary and report
// output go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cirng::cli

#pragma once

// Command-line front end. run() is the whole program minus process setup, so
// tests can drive it with string streams.

#include <iosfwd>
#include <string>
#include <vector>

namespace mcca::cli {

enum ExitCode : int {
    kOk = 0,
    kMathFailure = 1,
    kUsage = 2,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mcca::cli

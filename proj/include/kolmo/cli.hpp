#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kolmo::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDomain = 2,
  kNoConvergence = 3,
};

// Runs one command line (args excludes the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kolmo::cli

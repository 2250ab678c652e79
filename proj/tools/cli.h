#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twoq::cli {

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kParameter = 2,
  kVerification = 3,
  kGuard = 4,
};

// Runs the command line `args` (without the program name).
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twoq::cli

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace resmatch::cli {

enum ExitCode : int {
  kOk = 0,
  kDomainFailure = 1,  // invalid market or failed audit
  kInputFailure = 2,   // unreadable or unparseable input, bad arguments
};

// Runs the command line `args` (program name first).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace resmatch::cli

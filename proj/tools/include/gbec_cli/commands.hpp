#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gbec::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kSolverFailure = 3,
  kDegenerate = 4,
  kReportError = 5,
};

// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbec::cli

#pragma once

#include "uwbsim/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace uwbsim::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to `out` unless --out names a file; diagnostics
/// and summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace uwbsim::cli

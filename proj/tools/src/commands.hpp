#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace kslope::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitConfigError = 2,
  kExitMathError = 3,
  kExitUnconverged = 4,
};

/// Full command line without argv[0], e.g. {"verify", "--config", "x.json"}.
/// Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kslope::cli

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "kslope/error.hpp"
#include "kslope/experiment.hpp"

namespace kslope::cli {

struct RunConfig {
  DegenerationConfig degeneration;
  RunEnvironment environment;
  ReportFormat format = ReportFormat::kJson;
};

/// t_k = 10^{-k/2}, k = 2..6
std::vector<double> default_schedule();

/// A rejected config, with the 1-based line the problem was found on (0 when
/// unknown).
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::string source, int line, const std::string& detail);

  int line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }
  /// "source:line: Name: detail"
  std::string diagnostic() const;

 private:
  std::string source_;
  int line_;
};

/// Parses and validates a JSON run config. Throws ConfigError.
RunConfig parse_run_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace kslope::cli

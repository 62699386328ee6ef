#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kslope {

enum class ErrorCode {
  // poly
  kZeroPolynomial,
  kDegreeExceedsLineBundle,
  kRootClusterAmbiguity,
  // diagram
  kMissingQAxisPoint,
  kMissingPAxisPoint,
  // predictor / configuration
  kWeightSumNonzero,
  kAnchorNotMinimal,
  kNotABasis,
  kUnsupportedGenus,
  kInvalidConfig,
  // quadrature
  kAllTermsUnderflow,
  kDegenerateEmbedding,
  kGridUnresolved,
  kDivergentAnnulus,
  // experiment
  kTooFewSamples,
  kUnconvergedFit,
  kReportFormat,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Inverse of error_name.
std::optional<ErrorCode> error_from_name(std::string_view name) noexcept;

/// True for errors caused by a malformed or inconsistent configuration, as
/// opposed to numerical failures during a run.
bool is_config_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace kslope

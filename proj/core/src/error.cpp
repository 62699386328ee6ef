#include "kslope/error.hpp"

#include "kslope/rational.hpp"

namespace kslope {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::kDegreeExceedsLineBundle: return "DegreeExceedsLineBundle";
    case ErrorCode::kRootClusterAmbiguity: return "RootClusterAmbiguity";
    case ErrorCode::kMissingQAxisPoint: return "MissingQAxisPoint";
    case ErrorCode::kMissingPAxisPoint: return "MissingPAxisPoint";
    case ErrorCode::kWeightSumNonzero: return "WeightSumNonzero";
    case ErrorCode::kAnchorNotMinimal: return "AnchorNotMinimal";
    case ErrorCode::kNotABasis: return "NotABasis";
    case ErrorCode::kUnsupportedGenus: return "UnsupportedGenus";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kAllTermsUnderflow: return "AllTermsUnderflow";
    case ErrorCode::kDegenerateEmbedding: return "DegenerateEmbedding";
    case ErrorCode::kGridUnresolved: return "GridUnresolved";
    case ErrorCode::kDivergentAnnulus: return "DivergentAnnulus";
    case ErrorCode::kTooFewSamples: return "TooFewSamples";
    case ErrorCode::kUnconvergedFit: return "UnconvergedFit";
    case ErrorCode::kReportFormat: return "ReportFormat";
  }
  return "Unknown";
}

std::optional<ErrorCode> error_from_name(std::string_view name) noexcept {
  for (int c = 0; c <= static_cast<int>(ErrorCode::kReportFormat); ++c) {
    const auto code = static_cast<ErrorCode>(c);
    if (error_name(code) == name) return code;
  }
  return std::nullopt;
}

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDegreeExceedsLineBundle:
    case ErrorCode::kWeightSumNonzero:
    case ErrorCode::kAnchorNotMinimal:
    case ErrorCode::kNotABasis:
    case ErrorCode::kUnsupportedGenus:
    case ErrorCode::kInvalidConfig:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(error_name(code)) + ": " + detail),
      code_(code) {}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace kslope

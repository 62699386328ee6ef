#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kslope/predictor.hpp"
#include "kslope/quadrature.hpp"

namespace kslope {

enum class Functional { kNu, kFutaki };

std::string_view functional_name(Functional f) noexcept;

struct FitResult {
  double slope = 0.0;       ///< least squares over every sample
  double intercept = 0.0;
  std::vector<double> stepwise_slopes;
  double max_residual = 0.0;
  bool converged = false;   ///< last two stepwise slopes within convergence_tol

  double last_stepwise() const { return stepwise_slopes.empty() ? slope : stepwise_slopes.back(); }

  friend bool operator==(const FitResult&, const FitResult&) = default;
};

constexpr double kDefaultConvergenceTol = 0.01;
/// Below this a measured slope counts as zero when zero is predicted.
constexpr double kZeroSlopeFloor = 0.02;

/// Fits E against ln(1/t). The Futaki fit uses F0_direct. Needs at least 3
/// samples with strictly decreasing t; a sample that carries an error is
/// rethrown.
FitResult fit_slope(std::span<const EnergySample> samples, Functional f,
                    double convergence_tol = kDefaultConvergenceTol);

struct Verdict {
  double predicted = 0.0;
  double measured = 0.0;  ///< last stepwise slope
  double abs_error = 0.0;
  double rel_error = 0.0; ///< abs_error / |predicted|; infinite when predicted is 0 and measured is not
  bool pass = false;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

Verdict judge(double predicted, const FitResult& fit, double tolerance);

struct RunEnvironment {
  GridParams grid;
  std::vector<double> t_schedule;
  double tolerance = 0.03;
  double convergence_tol = kDefaultConvergenceTol;
  bool override_unconverged = false;

  friend bool operator==(const RunEnvironment&, const RunEnvironment&) = default;
};

struct SlopeReport {
  DegenerationConfig config;
  std::string config_digest;
  SlopePrediction prediction;
  std::vector<EnergySample> samples;
  FitResult nu_fit;
  FitResult futaki_fit;
  Verdict nu;
  Verdict futaki;
  bool pass = false;
  RunEnvironment environment;

  friend bool operator==(const SlopeReport&, const SlopeReport&) = default;
};

/// Verdicts for both functionals. Throws UnconvergedFit when a fit has not
/// converged, unless override_unconverged is set.
SlopeReport compare(const SlopePrediction& prediction, const FitResult& nu,
                    const FitResult& futaki, double tolerance,
                    bool override_unconverged = false);

/// predict + sample + fit + compare in one go.
SlopeReport run_experiment(const DegenerationConfig& config, const RunEnvironment& env);

/// Lower-case hex SHA-256 of the canonical JSON form of the config.
std::string config_digest(const DegenerationConfig& config);

enum class ReportFormat { kJson, kCsv };

inline constexpr int kReportSchemaVersion = 1;

/// Deterministic for identical input. Wall times only appear in CSV.
std::string serialize_report(const SlopeReport& report, ReportFormat format);

/// Reads the JSON form back. Throws ReportFormat on malformed input.
SlopeReport parse_report(std::string_view json);

/// Samples as a table: the CSV sample rows, or a JSON array.
std::string serialize_samples(std::span<const EnergySample> samples, int degree,
                              ReportFormat format);

/// Prediction as a JSON object.
std::string serialize_prediction(const SlopePrediction& prediction);

}  // namespace kslope

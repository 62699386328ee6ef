#include "kslope/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kslope/error.hpp"

namespace kslope {

std::string_view functional_name(Functional f) noexcept {
  return f == Functional::kNu ? "nu" : "futaki";
}

FitResult fit_slope(std::span<const EnergySample> samples, Functional f, double convergence_tol) {
  if (samples.size() < 3) {
    throw Error(ErrorCode::kTooFewSamples,
                "need at least 3 samples, got " + std::to_string(samples.size()));
  }
  std::vector<double> x, y;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (!s.ok()) throw Error(*s.error, "sample at t = " + std::to_string(s.t) + " failed");
    if (k > 0 && !(s.t < samples[k - 1].t)) {
      throw Error(ErrorCode::kInvalidConfig, "samples must have strictly decreasing t");
    }
    x.push_back(-std::log(s.t));
    y.push_back(f == Functional::kNu ? s.nu : s.F0_direct);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k)
    fit.max_residual = std::max(fit.max_residual, std::abs(y[k] - fit.intercept - fit.slope * x[k]));
  for (std::size_t k = 0; k + 1 < x.size(); ++k)
    fit.stepwise_slopes.push_back((y[k + 1] - y[k]) / (x[k + 1] - x[k]));
  const auto& st = fit.stepwise_slopes;
  fit.converged = std::abs(st[st.size() - 1] - st[st.size() - 2]) < convergence_tol;
  return fit;
}

Verdict judge(double predicted, const FitResult& fit, double tolerance) {
  Verdict v;
  v.predicted = predicted;
  v.measured = fit.last_stepwise();
  v.abs_error = std::abs(v.measured - predicted);
  if (predicted != 0.0) {
    v.rel_error = v.abs_error / std::abs(predicted);
    v.pass = v.rel_error <= tolerance;
  } else {
    v.rel_error = v.abs_error == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    v.pass = v.abs_error < kZeroSlopeFloor || v.rel_error <= tolerance;
  }
  return v;
}

SlopeReport compare(const SlopePrediction& prediction, const FitResult& nu,
                    const FitResult& futaki, double tolerance, bool override_unconverged) {
  if (!(tolerance > 0.0)) throw Error(ErrorCode::kInvalidConfig, "tolerance must be positive");
  if (!override_unconverged) {
    for (auto [fit, f] : {std::pair{&nu, Functional::kNu}, std::pair{&futaki, Functional::kFutaki}}) {
      if (!fit->converged) {
        const auto& st = fit->stepwise_slopes;
        std::string detail = std::string(functional_name(f)) + " stepwise slopes did not settle";
        if (st.size() >= 2)
          detail += " (" + std::to_string(st[st.size() - 2]) + " vs " + std::to_string(st.back()) + ")";
        throw Error(ErrorCode::kUnconvergedFit, detail);
      }
    }
  }
  SlopeReport r;
  r.prediction = prediction;
  r.nu_fit = nu;
  r.futaki_fit = futaki;
  r.nu = judge(prediction.mabuchi_coefficient, nu, tolerance);
  r.futaki = judge(prediction.futaki_coefficient, futaki, tolerance);
  r.pass = r.nu.pass && r.futaki.pass;
  r.environment.tolerance = tolerance;
  r.environment.override_unconverged = override_unconverged;
  return r;
}

SlopeReport run_experiment(const DegenerationConfig& config, const RunEnvironment& env) {
  const auto prediction = predict(config);
  auto samples = sample(config, env.t_schedule, env.grid);
  const auto nu = fit_slope(samples, Functional::kNu, env.convergence_tol);
  const auto futaki = fit_slope(samples, Functional::kFutaki, env.convergence_tol);
  SlopeReport r = compare(prediction, nu, futaki, env.tolerance, env.override_unconverged);
  r.config = config;
  r.config_digest = config_digest(config);
  r.samples = std::move(samples);
  r.environment = env;
  return r;
}

}  // namespace kslope

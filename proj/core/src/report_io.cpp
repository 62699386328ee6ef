#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "kslope/error.hpp"
#include "kslope/experiment.hpp"

namespace kslope {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kConventions =
    "densities w.r.t. dx dy in a chart with a 1/pi factor, so the Fubini-Study "
    "form of O(1) has total mass 1 and V = d; "
    "J = (1/(2 pi V)) int |d phi/dz|^2 dx dy; futaki = F0_direct; "
    "slopes are coefficients of ln(1/t); verdicts use the last stepwise slope";

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json config_json(const DegenerationConfig& c) {
  Json sections = Json::array();
  for (const auto& p : c.sections) {
    Json coeffs = Json::array();
    for (const auto& a : p.coeffs()) coeffs.push_back(complex_json(a));
    sections.push_back(std::move(coeffs));
  }
  Json weights = Json::array();
  for (auto w : c.weights) weights.push_back(w);
  Json j;
  j["label"] = c.label;
  j["degree"] = c.degree;
  j["genus"] = c.genus;
  j["sections"] = std::move(sections);
  j["weights"] = std::move(weights);
  return j;
}

// inf does not survive JSON; write null and read it back as +inf
Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json fit_json(const FitResult& f) {
  Json j;
  j["slope"] = number_or_null(f.slope);
  j["intercept"] = number_or_null(f.intercept);
  Json st = Json::array();
  for (double s : f.stepwise_slopes) st.push_back(number_or_null(s));
  j["stepwise_slopes"] = std::move(st);
  j["max_residual"] = number_or_null(f.max_residual);
  j["converged"] = f.converged;
  return j;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["predicted"] = v.predicted;
  j["measured"] = number_or_null(v.measured);
  j["abs_error"] = number_or_null(v.abs_error);
  j["rel_error"] = number_or_null(v.rel_error);
  j["pass"] = v.pass;
  return j;
}

Json sample_json(const EnergySample& s) {
  Json j;
  j["t"] = s.t;
  if (!s.ok()) {
    j["error"] = std::string(error_name(*s.error));
    j["error_message"] = s.error_message;
    return j;
  }
  j["nu"] = s.nu;
  j["F0_direct"] = s.F0_direct;
  j["F0_via_J"] = s.F0_via_J;
  j["J"] = s.J;
  j["I0"] = s.I0;
  j["volume"] = s.volume;
  return j;
}

Json prediction_json(const SlopePrediction& p) {
  Json j;
  j["mabuchi"] = p.mabuchi_coefficient;
  j["futaki"] = p.futaki_coefficient;
  j["futaki_global_term"] = p.futaki_global_term;
  j["volume"] = p.constants.volume;
  j["mu"] = p.constants.mu;
  Json zeros = Json::array();
  for (const auto& z : p.per_zero) {
    Json e;
    e["chart"] = std::string(chart_name(z.zero.chart));
    e["location"] = complex_json(z.zero.location);
    e["multiplicity"] = z.zero.multiplicity;
    e["q0"] = to_string(z.q0);
    e["squared_sum"] = to_string(z.squared_sum);
    e["mabuchi"] = z.mabuchi;
    e["futaki"] = z.futaki;
    zeros.push_back(std::move(e));
  }
  j["per_zero"] = std::move(zeros);
  return j;
}

Json grid_json(const GridParams& g) {
  Json j;
  j["angular_nodes"] = g.angular_nodes;
  j["radial_nodes_per_decade"] = g.radial_nodes_per_decade;
  j["inner_margin"] = g.inner_margin;
  j["design_t_min"] = g.design_t_min;
  return j;
}

// ---- parsing ----

double read_number(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

Complex read_complex(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Rational read_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

FitResult read_fit(const Json& j) {
  FitResult f;
  f.slope = read_number(j.at("slope"));
  f.intercept = read_number(j.at("intercept"));
  for (const auto& s : j.at("stepwise_slopes")) f.stepwise_slopes.push_back(read_number(s));
  f.max_residual = read_number(j.at("max_residual"));
  f.converged = j.at("converged").get<bool>();
  return f;
}

Verdict read_verdict(const Json& j) {
  Verdict v;
  v.predicted = j.at("predicted").get<double>();
  v.measured = read_number(j.at("measured"));
  v.abs_error = read_number(j.at("abs_error"));
  v.rel_error = read_number(j.at("rel_error"));
  v.pass = j.at("pass").get<bool>();
  return v;
}

}  // namespace

std::string config_digest(const DegenerationConfig& config) {
  const std::string canonical = config_json(config).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kReportFormat, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string serialize_prediction(const SlopePrediction& prediction) {
  return prediction_json(prediction).dump(2) + "\n";
}

std::string serialize_samples(std::span<const EnergySample> samples, int degree,
                              ReportFormat format) {
  if (format == ReportFormat::kJson) {
    Json j;
    j["degree"] = degree;
    Json arr = Json::array();
    for (const auto& s : samples) arr.push_back(sample_json(s));
    j["samples"] = std::move(arr);
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "t,functional,value,volume,wall_ms\n";
  for (const auto& s : samples) {
    const double ms = std::chrono::duration<double, std::milli>(s.wall_time).count();
    for (Functional f : {Functional::kNu, Functional::kFutaki}) {
      out << fmt(s.t) << ',' << functional_name(f) << ',';
      if (s.ok()) {
        out << fmt(f == Functional::kNu ? s.nu : s.F0_direct) << ',' << fmt(s.volume);
      } else {
        out << error_name(*s.error) << ',';
      }
      out << ',' << fmt(ms) << '\n';
    }
  }
  return out.str();
}

std::string serialize_report(const SlopeReport& r, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    std::ostringstream out;
    out << serialize_samples(r.samples, r.config.degree, format);
    out << "\nfunctional,predicted,measured,abs_error,rel_error,pass\n";
    for (auto [name, v] : {std::pair{"nu", &r.nu}, std::pair{"futaki", &r.futaki}}) {
      out << name << ',' << fmt(v->predicted) << ',' << fmt(v->measured) << ','
          << fmt(v->abs_error) << ',' << fmt(v->rel_error) << ',' << (v->pass ? "true" : "false")
          << '\n';
    }
    return out.str();
  }

  Json j;
  j["schema_version"] = kReportSchemaVersion;
  Json config = config_json(r.config);
  config["digest"] = r.config_digest;
  j["config"] = std::move(config);
  j["prediction"] = prediction_json(r.prediction);
  Json fits;
  fits["nu"] = fit_json(r.nu_fit);
  fits["futaki"] = fit_json(r.futaki_fit);
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back(sample_json(s));
  fits["samples"] = std::move(samples);
  j["fits"] = std::move(fits);
  Json verdicts;
  verdicts["nu"] = verdict_json(r.nu);
  verdicts["futaki"] = verdict_json(r.futaki);
  verdicts["pass"] = r.pass;
  j["verdicts"] = std::move(verdicts);
  Json env;
  env["grid"] = grid_json(r.environment.grid);
  Json sched = Json::array();
  for (double t : r.environment.t_schedule) sched.push_back(t);
  env["t_schedule"] = std::move(sched);
  env["tolerance"] = r.environment.tolerance;
  env["convergence_tol"] = r.environment.convergence_tol;
  env["zero_slope_floor"] = kZeroSlopeFloor;
  env["override_unconverged"] = r.environment.override_unconverged;
  env["conventions"] = std::string(kConventions);
  j["environment"] = std::move(env);
  return j.dump(2) + "\n";
}

SlopeReport parse_report(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorCode::kReportFormat, "unsupported schema_version");
    }
    SlopeReport r;
    const auto& c = j.at("config");
    r.config.label = c.at("label").get<std::string>();
    r.config.degree = c.at("degree").get<int>();
    r.config.genus = c.at("genus").get<int>();
    for (const auto& sec : c.at("sections")) {
      std::vector<Complex> coeffs;
      for (const auto& a : sec) coeffs.push_back(read_complex(a));
      r.config.sections.emplace_back(std::move(coeffs));
    }
    for (const auto& w : c.at("weights")) r.config.weights.push_back(w.get<std::int64_t>());
    r.config_digest = c.at("digest").get<std::string>();

    const auto& p = j.at("prediction");
    r.prediction.mabuchi_coefficient = p.at("mabuchi").get<double>();
    r.prediction.futaki_coefficient = p.at("futaki").get<double>();
    r.prediction.futaki_global_term = p.at("futaki_global_term").get<double>();
    r.prediction.constants.volume = p.at("volume").get<double>();
    r.prediction.constants.mu = p.at("mu").get<double>();
    for (const auto& e : p.at("per_zero")) {
      ZeroContribution z;
      const auto chart = e.at("chart").get<std::string>();
      if (chart == chart_name(Chart::kStandard)) {
        z.zero.chart = Chart::kStandard;
      } else if (chart == chart_name(Chart::kInfinity)) {
        z.zero.chart = Chart::kInfinity;
      } else {
        throw Error(ErrorCode::kReportFormat, "unknown chart " + chart);
      }
      z.zero.location = read_complex(e.at("location"));
      z.zero.multiplicity = e.at("multiplicity").get<int>();
      z.q0 = read_rational(e.at("q0").get<std::string>());
      z.squared_sum = read_rational(e.at("squared_sum").get<std::string>());
      z.mabuchi = e.at("mabuchi").get<double>();
      z.futaki = e.at("futaki").get<double>();
      r.prediction.per_zero.push_back(z);
    }

    const auto& f = j.at("fits");
    r.nu_fit = read_fit(f.at("nu"));
    r.futaki_fit = read_fit(f.at("futaki"));
    for (const auto& s : f.at("samples")) {
      EnergySample e;
      e.t = s.at("t").get<double>();
      if (s.contains("error")) {
        const auto name = s.at("error").get<std::string>();
        e.error = error_from_name(name);
        if (!e.error) throw Error(ErrorCode::kReportFormat, "unknown error name " + name);
        e.error_message = s.at("error_message").get<std::string>();
      } else {
        e.nu = s.at("nu").get<double>();
        e.F0_direct = s.at("F0_direct").get<double>();
        e.F0_via_J = s.at("F0_via_J").get<double>();
        e.J = s.at("J").get<double>();
        e.I0 = s.at("I0").get<double>();
        e.volume = s.at("volume").get<double>();
      }
      r.samples.push_back(std::move(e));
    }

    const auto& v = j.at("verdicts");
    r.nu = read_verdict(v.at("nu"));
    r.futaki = read_verdict(v.at("futaki"));
    r.pass = v.at("pass").get<bool>();

    const auto& env = j.at("environment");
    const auto& g = env.at("grid");
    r.environment.grid.angular_nodes = g.at("angular_nodes").get<int>();
    r.environment.grid.radial_nodes_per_decade = g.at("radial_nodes_per_decade").get<int>();
    r.environment.grid.inner_margin = g.at("inner_margin").get<double>();
    r.environment.grid.design_t_min = g.at("design_t_min").get<double>();
    for (const auto& t : env.at("t_schedule")) r.environment.t_schedule.push_back(t.get<double>());
    r.environment.tolerance = env.at("tolerance").get<double>();
    r.environment.convergence_tol = env.at("convergence_tol").get<double>();
    r.environment.override_unconverged = env.at("override_unconverged").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kReportFormat, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::kReportFormat, e.what());
  } catch (const std::out_of_range& e) {
    throw Error(ErrorCode::kReportFormat, e.what());
  }
}

}  // namespace kslope

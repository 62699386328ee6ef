#include "commands.hpp"

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "kslope/diagram.hpp"
#include "kslope/experiment.hpp"
#include "kslope/predictor.hpp"
#include "run_config.hpp"

namespace kslope::cli {

namespace {

struct Options {
  std::string config_path;
  std::optional<std::string> format;
  std::optional<double> tolerance;
  bool override_unconverged = false;
};

std::string complex_text(Complex c) {
  std::ostringstream s;
  s << std::setprecision(12) << c.real();
  if (c.imag() != 0.0) s << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
  return s.str();
}

int cmd_diagram(const RunConfig& rc, std::ostream& out) {
  const auto& config = rc.degeneration;
  const auto prediction = predict(config);
  bool all_trivial = true;
  int index = 0;
  for (const auto& zero : zeroes_of_anchor(config)) {
    const auto data = local_data(config, zero);
    const auto& dg = data.diagram;
    out << "zero " << index++ << ": chart " << chart_name(zero.chart) << ", location "
        << complex_text(zero.location) << ", multiplicity " << zero.multiplicity << "\n";
    out << "  points (p, q):";
    for (std::size_t j = 0; j < data.orders.size(); ++j)
      out << " (" << data.orders[j] << ", " << to_string(data.exponents[j]) << ")";
    out << "\n  vertices:";
    for (const auto& v : dg.vertices) out << " (" << v.p << ", " << to_string(v.q) << ")";
    out << "\n  slopes:";
    if (dg.slopes.empty()) out << " none";
    for (const auto& m : dg.slopes) out << " " << to_string(m);
    const Rational q0 = q_axis_intercept(dg);
    const Rational check = slope_sum_identity_check(dg);
    out << "\n  q0: " << to_string(q0) << "\n  sum p_a (m_a - m_{a+1}) = " << to_string(check)
        << (check == q0 ? " (matches q0)" : " (MISMATCH)") << "\n";
    if (dg.num_faces() > 0 || q0 != Rational(0)) all_trivial = false;
  }
  if (all_trivial) {
    out << "all diagrams trivial; predicted slopes 0\n";
  } else {
    out << "predicted slopes: mabuchi " << prediction.mabuchi_coefficient << ", futaki "
        << prediction.futaki_coefficient << "\n";
  }
  return kExitOk;
}

int cmd_predict(const RunConfig& rc, std::ostream& out) {
  const auto prediction = predict(rc.degeneration);
  if (rc.format == ReportFormat::kCsv) {
    out << "functional,predicted\n"
        << "nu," << prediction.mabuchi_coefficient << "\n"
        << "futaki," << prediction.futaki_coefficient << "\n";
  } else {
    out << serialize_prediction(prediction);
  }
  return kExitOk;
}

int cmd_measure(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto samples = sample(rc.degeneration, rc.environment.t_schedule, rc.environment.grid);
  out << serialize_samples(samples, rc.degeneration.degree, rc.format);
  int code = kExitOk;
  for (const auto& s : samples) {
    if (s.ok()) continue;
    err << "t = " << s.t << ": " << s.error_message << "\n";
    code = is_config_error(*s.error) ? kExitConfigError : kExitMathError;
  }
  return code;
}

int cmd_verify(const RunConfig& rc, std::ostream& out) {
  const auto report = run_experiment(rc.degeneration, rc.environment);
  out << serialize_report(report, rc.format);
  return report.pass ? kExitOk : kExitVerifyFailed;
}

int exit_code_for(ErrorCode code) {
  if (is_config_error(code) || code == ErrorCode::kTooFewSamples) return kExitConfigError;
  if (code == ErrorCode::kUnconvergedFit) return kExitUnconverged;
  return kExitMathError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton-diagram slope predictions for energy functionals, checked by quadrature", "kslope"};
  app.require_subcommand(1, 1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON run config")->required();
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tolerance", opt.tolerance, "Relative slope tolerance")
        ->check(CLI::PositiveNumber);
  };
  auto* diagram = app.add_subcommand("diagram", "Dump the Newton diagram at each anchor zero");
  auto* predict_cmd = app.add_subcommand("predict", "Predicted slopes as JSON");
  auto* measure = app.add_subcommand("measure", "Energies at each t of the schedule");
  auto* verify = app.add_subcommand("verify", "Measure, fit and compare with the prediction");
  for (auto* sub : {diagram, predict_cmd, measure, verify}) add_common(sub);
  verify->add_flag("--override-unconverged", opt.override_unconverged,
                   "Report verdicts even when the fits have not settled");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    RunConfig rc = load_run_config(opt.config_path);
    if (opt.format) rc.format = *opt.format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
    if (opt.tolerance) rc.environment.tolerance = *opt.tolerance;
    rc.environment.override_unconverged = opt.override_unconverged;

    if (diagram->parsed()) return cmd_diagram(rc, out);
    if (predict_cmd->parsed()) return cmd_predict(rc, out);
    if (measure->parsed()) return cmd_measure(rc, out, err);
    return cmd_verify(rc, out);
  } catch (const ConfigError& e) {
    err << e.diagnostic() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    err << opt.config_path << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << opt.config_path << ": " << e.what() << "\n";
    return kExitMathError;
  }
}

}  // namespace kslope::cli

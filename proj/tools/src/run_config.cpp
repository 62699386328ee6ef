#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kslope::cli {

namespace {

using Json = nlohmann::json;

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// nlohmann does not keep source positions, so semantic errors are pinned to
// the first occurrence of the key.
int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

struct Loader {
  std::string_view text;
  const std::string& source;

  [[noreturn]] void fail(std::string_view key, const std::string& detail,
                         ErrorCode code = ErrorCode::kInvalidConfig) const {
    throw ConfigError(code, source, line_of_key(text, key), detail);
  }

  Complex complex_value(const Json& j, std::string_view key) const {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      fail(key, "complex numbers are written as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
  }

  int positive_int(const Json& obj, std::string_view key, int fallback) const {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) fail(key, std::string(key) + " must be a positive integer");
    return static_cast<int>(v.get<long long>());
  }

  double positive_real(const Json& obj, std::string_view key, double fallback) const {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number() || !(v.get<double>() > 0.0)) fail(key, std::string(key) + " must be a positive number");
    return v.get<double>();
  }
};

}  // namespace

std::vector<double> default_schedule() {
  std::vector<double> t;
  for (int k = 2; k <= 6; ++k) t.push_back(std::pow(10.0, -0.5 * k));
  return t;
}

ConfigError::ConfigError(ErrorCode code, std::string source, int line, const std::string& detail)
    : Error(code, detail), source_(std::move(source)), line_(line) {}

std::string ConfigError::diagnostic() const {
  std::ostringstream out;
  out << source_;
  if (line_ > 0) out << ':' << line_;
  out << ": " << what();
  return out.str();
}

RunConfig parse_run_config(std::string_view text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(ErrorCode::kInvalidConfig, source,
                      line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0),
                      "malformed JSON: " + std::string(e.what()));
  }
  const Loader L{text, source};
  if (!j.is_object()) throw ConfigError(ErrorCode::kInvalidConfig, source, 1, "config must be a JSON object");

  static constexpr std::string_view known[] = {"label",   "degree",     "sections", "weights",
                                               "genus",   "t_schedule", "grid",     "tolerance",
                                               "format"};
  for (const auto& [key, _] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      L.fail(key, "unknown key \"" + key + "\"");

  RunConfig rc;
  auto& dc = rc.degeneration;
  for (const char* key : {"degree", "sections", "weights"})
    if (!j.contains(key)) throw ConfigError(ErrorCode::kInvalidConfig, source, 1, std::string("missing key \"") + key + "\"");

  if (j.contains("label")) {
    if (!j["label"].is_string()) L.fail("label", "label must be a string");
    dc.label = j["label"].get<std::string>();
  }
  dc.degree = L.positive_int(j, "degree", 1);
  if (j.contains("genus")) {
    if (!j["genus"].is_number_integer() || j["genus"].get<long long>() < 0) L.fail("genus", "genus must be a non-negative integer");
    dc.genus = static_cast<int>(j["genus"].get<long long>());
  }

  const auto& sections = j["sections"];
  if (!sections.is_array() || sections.empty()) L.fail("sections", "sections must be a non-empty array");
  for (const auto& sec : sections) {
    if (!sec.is_array() || sec.empty()) L.fail("sections", "each section is a non-empty array of [re, im] coefficients");
    std::vector<Complex> coeffs;
    for (const auto& c : sec) coeffs.push_back(L.complex_value(c, "sections"));
    dc.sections.emplace_back(std::move(coeffs));
  }

  const auto& weights = j["weights"];
  if (!weights.is_array()) L.fail("weights", "weights must be an array of integers");
  for (const auto& w : weights) {
    if (!w.is_number_integer()) L.fail("weights", "weights must be integers");
    dc.weights.push_back(w.get<std::int64_t>());
  }

  auto& env = rc.environment;
  env.t_schedule = default_schedule();
  if (j.contains("t_schedule")) {
    const auto& ts = j["t_schedule"];
    if (!ts.is_array()) L.fail("t_schedule", "t_schedule must be an array");
    env.t_schedule.clear();
    for (const auto& t : ts) {
      if (!t.is_number()) L.fail("t_schedule", "t_schedule entries must be numbers");
      env.t_schedule.push_back(t.get<double>());
    }
    for (std::size_t k = 0; k < env.t_schedule.size(); ++k) {
      const double t = env.t_schedule[k];
      if (!(t > 0.0 && t <= 1.0) || (k > 0 && !(t < env.t_schedule[k - 1])))
        L.fail("t_schedule", "t_schedule must be strictly decreasing in (0, 1]");
    }
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (!g.is_object()) L.fail("grid", "grid must be an object");
    for (const auto& [key, _] : g.items())
      if (key != "angular_nodes" && key != "radial_nodes_per_decade" && key != "inner_margin" &&
          key != "design_t_min")
        L.fail(key, "unknown grid key \"" + key + "\"");
    env.grid.angular_nodes = L.positive_int(g, "angular_nodes", env.grid.angular_nodes);
    env.grid.radial_nodes_per_decade =
        L.positive_int(g, "radial_nodes_per_decade", env.grid.radial_nodes_per_decade);
    env.grid.inner_margin = L.positive_real(g, "inner_margin", env.grid.inner_margin);
    env.grid.design_t_min = L.positive_real(g, "design_t_min", env.grid.design_t_min);
    if (env.grid.inner_margin > 1.0) L.fail("inner_margin", "inner_margin must be at most 1");
    if (env.grid.design_t_min > 1.0) L.fail("design_t_min", "design_t_min must be at most 1");
  }
  env.tolerance = L.positive_real(j, "tolerance", env.tolerance);
  if (j.contains("format")) {
    const auto& f = j["format"];
    if (f == "json") {
      rc.format = ReportFormat::kJson;
    } else if (f == "csv") {
      rc.format = ReportFormat::kCsv;
    } else {
      L.fail("format", "format must be \"json\" or \"csv\"");
    }
  }

  try {
    validate_config(dc);
  } catch (const Error& e) {
    std::string_view key = "sections";
    if (e.code() == ErrorCode::kWeightSumNonzero || e.code() == ErrorCode::kAnchorNotMinimal) key = "weights";
    if (e.code() == ErrorCode::kUnsupportedGenus) key = "genus";
    std::string detail = e.what();
    const auto colon = detail.find(": ");
    if (colon != std::string::npos) detail = detail.substr(colon + 2);
    throw ConfigError(e.code(), source, line_of_key(text, key), detail);
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ErrorCode::kInvalidConfig, path.string(), 0, "cannot read file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path.string());
}

}  // namespace kslope::cli

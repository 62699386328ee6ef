#include "kslope/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

namespace kslope {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> log_weights_at(const DegenerationConfig& config, double t) {
  const double lt = std::log(t);
  std::vector<double> lw;
  lw.reserve(config.weights.size());
  for (auto a : config.weights) lw.push_back(static_cast<double>(a) * lt);
  return lw;
}

void check_t(double t) {
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::kInvalidConfig, "t must lie in (0, 1]");
}

// Per-node integrands, already multiplied by the node weight.
enum Quantity : std::size_t {
  kVolume,
  kPhiOmega0,
  kPhiSum,     // phi (omega_0 + omega_t)
  kGradient,   // |d phi / dz|^2 / pi
  kEntropy,    // ln(omega_t / omega_0) omega_t
  kPhiRicci,
  kQuantityCount
};

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double phi(const DegenerationConfig& config, double t, Chart chart, Complex z) {
  check_t(t);
  const SectionFamily family(chart_sections(config, chart));
  const std::vector<double> zero(config.sections.size(), 0.0);
  return family.evaluate(log_weights_at(config, t), z).log_sum - family.evaluate(zero, z).log_sum;
}

double omega_density(const DegenerationConfig& config, double t, Chart chart, Complex z) {
  check_t(t);
  const SectionFamily family(chart_sections(config, chart));
  const double ll = family.evaluate(log_weights_at(config, t), z).log_laplacian_log;
  if (ll == kNegInf) throw Error(ErrorCode::kDegenerateEmbedding, "omega_t vanishes");
  return std::exp(ll) / std::numbers::pi;
}

double ricci_density(const DegenerationConfig& config, Chart chart, Complex z) {
  return ChartFields(chart_sections(config, chart)).reference(z).ricci;
}

EnergySample evaluate_energies(const DegenerationConfig& config, Complex t,
                               const QuadratureGrid& grid) {
  return evaluate_energies(config, std::abs(t), grid);
}

EnergySample evaluate_energies(const DegenerationConfig& config, double t,
                               const QuadratureGrid& grid) {
  check_t(t);
  if (t < grid.params().design_t_min * (1.0 - 1e-12)) {
    throw Error(ErrorCode::kGridUnresolved,
                "t = " + std::to_string(t) + " is below the grid design minimum " +
                    std::to_string(grid.params().design_t_min));
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> lw = log_weights_at(config, t);

  // Flatten (patch, node) so work splits into fixed ranges; each node writes
  // its own slot, and the sums below run in a fixed order.
  std::vector<std::pair<std::size_t, std::size_t>> index;
  index.reserve(grid.node_count());
  for (std::size_t p = 0; p < grid.patches().size(); ++p)
    for (std::size_t i = 0; i < grid.patches()[p].nodes.size(); ++i) index.emplace_back(p, i);

  const std::size_t n = index.size();
  std::vector<std::vector<double>> slots(kQuantityCount, std::vector<double>(n, 0.0));
  std::vector<std::string> failures;

  auto work = [&](std::size_t begin, std::size_t end, std::string& failure) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [p, i] = index[k];
      const auto& patch = grid.patches()[p];
      const auto& ref = grid.reference(p)[i];
      const auto ev = grid.fields(p).weighted(lw, patch.nodes[i]);
      if (ev.log_laplacian_log == kNegInf) {
        failure = "omega_t vanishes at a quadrature node";
        return;
      }
      const double w = patch.weights[i];
      const double f = ev.log_sum - ref.log_sum;
      const double rho_t = std::exp(ev.log_laplacian_log) / std::numbers::pi;
      const double rho_0 = std::exp(ref.log_rho) / std::numbers::pi;
      const Complex dphi = ev.dlog - ref.dlog;
      slots[kVolume][k] = w * rho_t;
      slots[kPhiOmega0][k] = w * f * rho_0;
      slots[kPhiSum][k] = w * f * (rho_0 + rho_t);
      slots[kGradient][k] = w * std::norm(dphi) / std::numbers::pi;
      slots[kEntropy][k] = w * (ev.log_laplacian_log - ref.log_rho) * rho_t;
      slots[kPhiRicci][k] = w * f * ref.ricci;
    }
  };

  unsigned threads = grid.params().threads > 0 ? static_cast<unsigned>(grid.params().threads)
                                               : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 4096)));
  failures.resize(threads);
  if (threads <= 1) {
    work(0, n, failures[0]);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned th = 0; th < threads; ++th) {
      const std::size_t b = std::min(n, th * chunk), e = std::min(n, b + chunk);
      pool.emplace_back([&, b, e, th] {
        try {
          work(b, e, failures[th]);
        } catch (const Error& err) {
          failures[th] = err.what();
        }
      });
    }
  }
  for (const auto& f : failures)
    if (!f.empty()) throw Error(ErrorCode::kDegenerateEmbedding, f);

  std::array<double, kQuantityCount> total{};
  for (std::size_t q = 0; q < kQuantityCount; ++q) total[q] = pairwise_sum(slots[q]);

  const auto consts = geometric_constants(config);
  const double V = consts.volume;
  EnergySample s;
  s.t = t;
  s.volume = total[kVolume];
  s.I0 = total[kPhiOmega0] / V;
  s.F0_direct = -total[kPhiSum] / (2.0 * V);
  s.J = total[kGradient] / (2.0 * V);
  s.F0_via_J = s.J - s.I0;
  s.nu = (total[kEntropy] - total[kPhiRicci] + 0.5 * consts.mu * total[kPhiSum]) / V;
  s.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return s;
}

double mabuchi_energy(const DegenerationConfig& config, double t, const QuadratureGrid& grid) {
  return evaluate_energies(config, t, grid).nu;
}

double futaki_direct(const DegenerationConfig& config, double t, const QuadratureGrid& grid) {
  return evaluate_energies(config, t, grid).F0_direct;
}

double futaki_via_J(const DegenerationConfig& config, double t, const QuadratureGrid& grid) {
  return evaluate_energies(config, t, grid).F0_via_J;
}

double ricci_total(const QuadratureGrid& grid) {
  std::vector<double> values;
  values.reserve(grid.node_count());
  for (std::size_t p = 0; p < grid.patches().size(); ++p) {
    const auto& patch = grid.patches()[p];
    for (std::size_t i = 0; i < patch.nodes.size(); ++i)
      values.push_back(patch.weights[i] * grid.reference(p)[i].ricci);
  }
  return pairwise_sum(values);
}

double annulus_oracle(std::span<const DiagramPoint> points, int alpha, double t,
                      const NewtonDiagram& diagram) {
  check_t(t);
  const auto& v = diagram.vertices.at(static_cast<std::size_t>(alpha));
  double q_excess = 0.0;
  long p_excess = 0;
  for (const auto& pt : points) {
    q_excess += to_double(pt.q - v.q);
    p_excess += pt.p - v.p;
  }
  const double lt = std::log(t);
  const double u_hi = to_double(diagram.slope(alpha + 1)) * lt;
  double u_lo = 0.0;
  if (alpha == 0) {
    if (p_excess <= 0) {
      throw Error(ErrorCode::kDivergentAnnulus, "integral diverges at the origin");
    }
    // integrand decays like exp(2 p_excess u); stop once it is below 1e-18
    u_lo = u_hi - 21.0 * std::log(10.0) / p_excess;
  } else {
    u_lo = to_double(diagram.slope(alpha)) * lt;
  }
  if (u_hi <= u_lo) return 0.0;

  // In u = ln r the measure dA / (2 pi r^2) becomes du d(theta) / (2 pi).
  using gauss = boost::math::quadrature::gauss<double, 20>;
  const int panels = std::max(1, static_cast<int>(std::ceil((u_hi - u_lo) * std::max<long>(1, std::abs(p_excess)))));
  std::vector<double> parts;
  const double h = (u_hi - u_lo) / panels;
  for (int k = 0; k < panels; ++k) {
    const double a = u_lo + k * h, b = a + h;
    parts.push_back(gauss::integrate(
        [&](double u) { return std::exp(2.0 * q_excess * lt + 2.0 * static_cast<double>(p_excess) * u); },
        a, b));
  }
  return pairwise_sum(parts);
}

std::vector<EnergySample> sample(const DegenerationConfig& config,
                                 std::span<const double> t_schedule, const GridParams& params) {
  if (t_schedule.empty()) return {};
  const QuadratureGrid grid(config, params);
  return sample(config, t_schedule, grid);
}

std::vector<EnergySample> sample(const DegenerationConfig& config,
                                 std::span<const double> t_schedule, const QuadratureGrid& grid) {
  for (std::size_t k = 0; k < t_schedule.size(); ++k) {
    if (!(t_schedule[k] > 0.0 && t_schedule[k] <= 1.0) ||
        (k > 0 && !(t_schedule[k] < t_schedule[k - 1]))) {
      throw Error(ErrorCode::kInvalidConfig, "t_schedule must be strictly decreasing in (0, 1]");
    }
  }
  std::vector<EnergySample> out;
  out.reserve(t_schedule.size());
  for (double t : t_schedule) {
    try {
      out.push_back(evaluate_energies(config, t, grid));
    } catch (const Error& err) {
      EnergySample failed;
      failed.t = t;
      failed.error = err.code();
      failed.error_message = err.what();
      out.push_back(std::move(failed));
    }
  }
  return out;
}

}  // namespace kslope

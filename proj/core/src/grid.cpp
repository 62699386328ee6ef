#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "kslope/error.hpp"
#include "kslope/quadrature.hpp"

namespace kslope {

namespace {

constexpr int kPanelOrder = 8;
// The partition-of-unity bump around a zero is 1 inside s0 * radius.
constexpr double kBumpPlateau = 0.25;
constexpr double kMaxPatchRadius = 0.5;

struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

template <int N>
void gauss_nodes(std::vector<double>& xs, std::vector<double>& ws) {
  using gauss = boost::math::quadrature::gauss<double, N>;
  const auto& a = gauss::abscissa();
  const auto& b = gauss::weights();
  xs.assign(N, 0.0);
  ws.assign(N, 0.0);
  // boost stores the non-negative half, starting at the centre
  int k = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] == 0.0) continue;
    xs[k] = -a[i];
    ws[k++] = b[i];
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    xs[k] = a[i];
    ws[k++] = b[i];
  }
}

// Composite Gauss-Legendre of the given order (at most kPanelOrder) over
// consecutive breakpoints; each interval gets ceil(length * panels_per_unit)
// panels.
Rule composite_rule(std::vector<double> breaks, double panels_per_unit, int order = kPanelOrder) {
  std::vector<double> xs, ws;
  switch (std::clamp(order, 1, kPanelOrder)) {
    case 1: gauss_nodes<1>(xs, ws); break;
    case 2: gauss_nodes<2>(xs, ws); break;
    case 3: gauss_nodes<3>(xs, ws); break;
    case 4: gauss_nodes<4>(xs, ws); break;
    case 5: gauss_nodes<5>(xs, ws); break;
    case 6: gauss_nodes<6>(xs, ws); break;
    case 7: gauss_nodes<7>(xs, ws); break;
    default: gauss_nodes<8>(xs, ws); break;
  }
  const int n = static_cast<int>(xs.size());

  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-12; }),
               breaks.end());
  Rule rule;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double lo = breaks[k], hi = breaks[k + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) * panels_per_unit - 1e-9)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (int i = 0; i < n; ++i) {
        rule.x.push_back(mid + 0.5 * h * xs[i]);
        rule.w.push_back(0.5 * h * ws[i]);
      }
    }
  }
  return rule;
}

// 1 on [0, s0], 0 on [1, inf), C^3 septic smoothstep between.
double bump(double s) {
  if (s <= kBumpPlateau) return 1.0;
  if (s >= 1.0) return 0.0;
  const double x = (s - kBumpPlateau) / (1.0 - kBumpPlateau);
  const double x4 = x * x * x * x;
  return 1.0 - x4 * (35.0 - 84.0 * x + 70.0 * x * x - 20.0 * x * x * x);
}

std::array<double, 3> on_sphere(Chart chart, Complex c) {
  // stereographic image of the point, with w = 1/z in the infinity chart
  const double n = std::norm(c);
  if (chart == Chart::kStandard)
    return {2.0 * c.real() / (1.0 + n), 2.0 * c.imag() / (1.0 + n), (n - 1.0) / (n + 1.0)};
  return {2.0 * c.real() / (1.0 + n), -2.0 * c.imag() / (1.0 + n), (1.0 - n) / (1.0 + n)};
}

double chordal(Chart ca, Complex a, Chart cb, Complex b) {
  const auto p = on_sphere(ca, a);
  const auto q = on_sphere(cb, b);
  return std::hypot(p[0] - q[0], p[1] - q[1], p[2] - q[2]);
}

}  // namespace

ChartFields::ChartFields(std::vector<ComplexPoly> polys)
    : sections_(std::move(polys)),
      wronskians_(std::vector<ComplexPoly>(sections_.wronskians().begin(),
                                           sections_.wronskians().end())),
      zero_weights_(sections_.size(), 0.0),
      zero_wronskian_weights_(wronskians_.size(), 0.0) {}

ChartFields::Reference ChartFields::reference(Complex z) const {
  const auto s = sections_.evaluate(zero_weights_, z);
  if (s.log_laplacian_log == -std::numeric_limits<double>::infinity()) {
    throw Error(ErrorCode::kDegenerateEmbedding, "omega_0 vanishes");
  }
  double wronskian_lap = 0.0;
  if (wronskians_.size() > 1) {
    try {
      wronskian_lap = std::exp(wronskians_.evaluate(zero_wronskian_weights_, z).log_laplacian_log);
    } catch (const Error&) {
      throw Error(ErrorCode::kDegenerateEmbedding, "all Wronskians vanish");
    }
  }
  Reference out;
  out.log_sum = s.log_sum;
  out.log_rho = s.log_laplacian_log;
  out.dlog = s.dlog;
  out.ricci = (2.0 * std::exp(s.log_laplacian_log) - wronskian_lap) / std::numbers::pi;
  return out;
}

QuadratureGrid::QuadratureGrid(const DegenerationConfig& config, const GridParams& params)
    : params_(params) {
  validate_config(config);
  if (config.genus != 0) {
    throw Error(ErrorCode::kUnsupportedGenus, "quadrature is implemented on P^1 only");
  }
  if (params.angular_nodes < 1 || params.radial_nodes_per_decade < 1 ||
      !(params.inner_margin > 0.0 && params.inner_margin <= 1.0) ||
      !(params.design_t_min > 0.0 && params.design_t_min <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "grid parameters out of range");
  }

  for (const auto& z : zeroes_of_anchor(config)) zeros_.push_back(local_data(config, z));

  const std::size_t nz = zeros_.size();
  std::vector<double> radius(nz, kMaxPatchRadius);
  for (std::size_t k = 0; k < nz; ++k)
    for (std::size_t l = 0; l < nz; ++l)
      if (k != l)
        radius[k] = std::min(radius[k], chordal(zeros_[k].chart, zeros_[k].location,
                                                zeros_[l].chart, zeros_[l].location) / 4.5);

  auto partition = [&](Chart chart, Complex z) {
    double total = 0.0;
    for (std::size_t k = 0; k < nz; ++k) {
      Complex local;
      if (zeros_[k].chart == chart) {
        local = z;
      } else {
        if (z == Complex{0.0, 0.0}) continue;
        local = 1.0 / z;
      }
      total += bump(std::abs(local - zeros_[k].location) / radius[k]);
    }
    return total;
  };

  // radial_nodes_per_decade below kPanelOrder lowers the panel order instead
  const int order = std::min(kPanelOrder, params.radial_nodes_per_decade);
  const double panels_per_decade = std::ceil(static_cast<double>(params.radial_nodes_per_decade) / order);
  const double ln10 = std::log(10.0);

  // Background: polar grid on |z| <= 1 in each chart.
  const int bg_angular = 2 * params.angular_nodes;
  const double bg_panels = 2.0 * panels_per_decade;
  for (Chart chart : {Chart::kStandard, Chart::kInfinity}) {
    std::vector<double> breaks{0.0, 1.0};
    for (std::size_t k = 0; k < nz; ++k) {
      if (zeros_[k].chart == chart && zeros_[k].location == Complex{0.0, 0.0}) {
        breaks.push_back(kBumpPlateau * radius[k]);
        breaks.push_back(radius[k]);
      }
    }
    const Rule radial = composite_rule(breaks, bg_panels, order);
    GridPatch patch;
    patch.kind = GridPatch::Kind::kBackground;
    patch.chart = chart;
    const double dtheta = 2.0 * std::numbers::pi / bg_angular;
    for (std::size_t i = 0; i < radial.x.size(); ++i) {
      const double r = radial.x[i];
      for (int a = 0; a < bg_angular; ++a) {
        const Complex z = std::polar(r, a * dtheta);
        const double w = r * radial.w[i] * dtheta * (1.0 - partition(chart, z));
        if (w <= 0.0) continue;
        patch.nodes.push_back(z);
        patch.weights.push_back(w);
      }
    }
    patches_.push_back(std::move(patch));
    fields_.emplace_back(chart_sections(config, chart));
    patch_radii_.emplace_back();
  }

  // One log-polar patch per zero of the anchor.
  for (std::size_t k = 0; k < nz; ++k) {
    const auto& zero = zeros_[k];
    const double rho = radius[k];
    double r_in = params.inner_margin * rho;
    if (zero.diagram.num_faces() > 0) {
      const double m1 = to_double(zero.diagram.slope(1));
      r_in = std::min(r_in, params.inner_margin * std::pow(params.design_t_min, m1));
    }
    r_in = std::max(r_in, 1e-280);

    std::vector<double> breaks;
    const double u_in = std::log(r_in), u_plateau = std::log(kBumpPlateau * rho);
    for (double u = u_in; u < u_plateau; u += ln10) breaks.push_back(u);
    breaks.push_back(u_plateau);
    breaks.push_back(std::log(rho));
    const Rule logr = composite_rule(breaks, panels_per_decade / ln10, order);
    const Rule cap = composite_rule({0.0, r_in}, 1.0 / r_in);

    GridPatch patch;
    patch.kind = GridPatch::Kind::kZero;
    patch.chart = zero.chart;
    patch.zero_index = static_cast<int>(k);
    patch.centre = zero.location;
    patch.outer_radius = rho;
    patch.inner_radius = r_in;
    std::vector<double> radii;
    const int n_ang = params.angular_nodes;
    const double dtheta = 2.0 * std::numbers::pi / n_ang;
    for (std::size_t i = 0; i < cap.x.size(); ++i) {
      radii.push_back(cap.x[i]);
      for (int a = 0; a < n_ang; ++a) {
        patch.nodes.push_back(std::polar(cap.x[i], a * dtheta));
        patch.weights.push_back(cap.x[i] * cap.w[i] * dtheta);
      }
    }
    for (std::size_t i = 0; i < logr.x.size(); ++i) {
      const double r = std::exp(logr.x[i]);
      const double chi = bump(r / rho);
      radii.push_back(r);
      if (chi <= 0.0) continue;
      for (int a = 0; a < n_ang; ++a) {
        patch.nodes.push_back(std::polar(r, a * dtheta));
        patch.weights.push_back(r * r * logr.w[i] * dtheta * chi);
      }
    }
    patches_.push_back(std::move(patch));
    fields_.emplace_back(zero.local_sections);
    patch_radii_.push_back(std::move(radii));
  }

  reference_.resize(patches_.size());
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    reference_[p].reserve(patches_[p].nodes.size());
    for (const auto& z : patches_[p].nodes) reference_[p].push_back(fields_[p].reference(z));
  }
}

std::size_t QuadratureGrid::node_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : patches_) n += p.nodes.size();
  return n;
}

int QuadratureGrid::radial_nodes_in_annulus(int zero_index, int alpha, double t) const {
  const auto& diagram = zeros_.at(static_cast<std::size_t>(zero_index)).diagram;
  const double lo = alpha == 0 ? 0.0 : std::pow(t, to_double(diagram.slope(alpha)));
  const double hi = std::pow(t, to_double(diagram.slope(alpha + 1)));
  for (std::size_t p = 0; p < patches_.size(); ++p) {
    if (patches_[p].zero_index != zero_index) continue;
    const auto& radii = patch_radii_[p];
    return static_cast<int>(std::count_if(radii.begin(), radii.end(),
                                          [&](double r) { return r >= lo && r < hi; }));
  }
  return 0;
}

}  // namespace kslope

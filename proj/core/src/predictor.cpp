#include "kslope/predictor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/LU>

#include "kslope/error.hpp"

namespace kslope {

std::string_view chart_name(Chart chart) noexcept {
  return chart == Chart::kStandard ? "standard" : "infinity";
}

std::vector<Rational> weights_to_exponents(std::span<const std::int64_t> weights) {
  if (weights.empty()) throw Error(ErrorCode::kInvalidConfig, "empty weight vector");
  const std::int64_t sum = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
  if (sum != 0) {
    throw Error(ErrorCode::kWeightSumNonzero, "weights sum to " + std::to_string(sum));
  }
  const std::int64_t anchor = weights.back();
  if (*std::min_element(weights.begin(), weights.end()) != anchor) {
    throw Error(ErrorCode::kAnchorNotMinimal, "last weight " + std::to_string(anchor) +
                                                  " is not the minimum");
  }
  std::vector<Rational> q;
  q.reserve(weights.size());
  for (auto a : weights) q.emplace_back(a - anchor);
  return q;
}

void validate_config(const DegenerationConfig& config) {
  const int d = config.degree;
  if (d < 1) throw Error(ErrorCode::kInvalidConfig, "degree must be positive");
  if (config.genus < 0) throw Error(ErrorCode::kInvalidConfig, "genus must be nonnegative");
  const auto n = config.sections.size();
  if (n != static_cast<std::size_t>(d) + 1) {
    throw Error(ErrorCode::kNotABasis, std::to_string(n) + " sections given, a basis of O(" +
                                           std::to_string(d) + ") needs " +
                                           std::to_string(d + 1));
  }
  if (config.weights.size() != n) {
    throw Error(ErrorCode::kInvalidConfig, "weights and sections differ in length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (config.sections[j].effective_degree() > d) {
      throw Error(ErrorCode::kDegreeExceedsLineBundle,
                  "section " + std::to_string(j) + " has degree " +
                      std::to_string(config.sections[j].effective_degree()));
    }
  }
  weights_to_exponents(config.weights);

  Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& s = config.sections[j];
    const double scale = s.max_abs_coeff();
    for (std::size_t k = 0; k < s.size() && k < n; ++k)
      coeffs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
          scale > 0.0 ? s[k] / scale : Complex{};
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(coeffs);
  lu.setThreshold(1e-10);
  if (lu.rank() != static_cast<Eigen::Index>(n)) {
    throw Error(ErrorCode::kNotABasis, "sections are linearly dependent");
  }
}

GeometricConstants geometric_constants(const DegenerationConfig& config) {
  const double volume = config.degree;
  return {volume, (2.0 - 2.0 * config.genus) / volume};
}

std::vector<ComplexPoly> chart_sections(const DegenerationConfig& config, Chart chart) {
  std::vector<ComplexPoly> out;
  out.reserve(config.sections.size());
  for (const auto& s : config.sections) {
    if (chart == Chart::kInfinity) {
      out.push_back(chart_swap(s, config.degree));
    } else {
      // chart_swap twice pads to d+1 and validates the degree
      out.push_back(chart_swap(chart_swap(s, config.degree), config.degree));
    }
  }
  return out;
}

std::vector<AnchorZero> zeroes_of_anchor(const DegenerationConfig& config, double cluster_tol) {
  const ComplexPoly& anchor = config.sections.back();
  const int d = config.degree;
  const int e = anchor.effective_degree();
  if (e < 0) throw Error(ErrorCode::kZeroPolynomial, "anchor section is identically zero");
  if (e > d) throw Error(ErrorCode::kDegreeExceedsLineBundle, "anchor degree exceeds d");

  const ComplexPoly swapped = chart_swap(anchor, d);
  std::vector<AnchorZero> zeros;
  std::vector<AnchorZero> far;
  if (e > 0) {
    for (const auto& cluster : roots_with_multiplicity(anchor, cluster_tol)) {
      if (std::abs(cluster.location) <= 1.0) {
        zeros.push_back({Chart::kStandard, cluster.location, cluster.multiplicity});
      } else {
        const Complex w = refine_root(swapped, 1.0 / cluster.location, cluster.multiplicity);
        far.push_back({Chart::kInfinity, w, cluster.multiplicity});
      }
    }
  }
  if (d > e) zeros.push_back({Chart::kInfinity, Complex{0.0, 0.0}, d - e});
  zeros.insert(zeros.end(), far.begin(), far.end());
  return zeros;
}

LocalZeroData local_data(const DegenerationConfig& config, const AnchorZero& zero,
                         double cluster_tol) {
  LocalZeroData out;
  out.chart = zero.chart;
  out.location = zero.location;
  out.anchor_multiplicity = zero.multiplicity;
  out.exponents = weights_to_exponents(config.weights);

  const auto polys = chart_sections(config, zero.chart);
  std::vector<DiagramPoint> points;
  for (std::size_t j = 0; j < polys.size(); ++j) {
    const auto vo = vanishing_order(polys[j], zero.location, cluster_tol);
    out.orders.push_back(vo.order);
    out.leading.push_back(vo.leading);
    points.push_back({vo.order, out.exponents[j], std::norm(vo.leading)});

    auto taylor = taylor_coefficients(polys[j], zero.location);
    std::fill(taylor.begin(), taylor.begin() + vo.order, Complex{0.0, 0.0});
    out.local_sections.emplace_back(std::move(taylor));
  }
  if (out.orders.back() != zero.multiplicity) {
    throw Error(ErrorCode::kRootClusterAmbiguity,
                "anchor vanishes to order " + std::to_string(out.orders.back()) +
                    " but the root cluster has multiplicity " +
                    std::to_string(zero.multiplicity));
  }
  out.diagram = build_diagram(points);
  return out;
}

double local_mabuchi_coefficient(const LocalZeroData& data, const GeometricConstants& consts) {
  const double q0 = to_double(q_axis_intercept(data.diagram));
  const double s = to_double(squared_order_slope_sum(data.diagram));
  return (2.0 * q0 - consts.mu * s) / consts.volume;
}

double local_futaki_coefficient(const LocalZeroData& data, const GeometricConstants& consts) {
  return to_double(squared_order_slope_sum(data.diagram)) / consts.volume;
}

SlopePrediction predict(const DegenerationConfig& config) {
  return predict(config, geometric_constants(config));
}

SlopePrediction predict(const DegenerationConfig& config, const GeometricConstants& consts) {
  validate_config(config);
  SlopePrediction out;
  out.constants = consts;
  out.futaki_global_term = 2.0 * static_cast<double>(config.weights.back());

  Rational q0_total(0), squared_total(0);
  for (const auto& zero : zeroes_of_anchor(config)) {
    const auto data = local_data(config, zero);
    ZeroContribution c;
    c.zero = zero;
    c.q0 = q_axis_intercept(data.diagram);
    c.squared_sum = squared_order_slope_sum(data.diagram);
    c.mabuchi = local_mabuchi_coefficient(data, consts);
    c.futaki = local_futaki_coefficient(data, consts);
    q0_total += c.q0;
    squared_total += c.squared_sum;
    out.per_zero.push_back(c);
  }
  // Sum exactly, convert once.
  out.mabuchi_coefficient =
      (2.0 * to_double(q0_total) - consts.mu * to_double(squared_total)) / consts.volume;
  out.futaki_coefficient = out.futaki_global_term + to_double(squared_total) / consts.volume;
  return out;
}

}  // namespace kslope

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kslope/diagram.hpp"
#include "kslope/poly.hpp"
#include "kslope/rational.hpp"

namespace kslope {

/// A curve in P^N given by a basis of sections of O(d) on P^1 together with
/// the integer weights of a diagonal one-parameter subgroup. The last
/// section is the anchor and must carry the minimal weight.
struct DegenerationConfig {
  int degree = 1;
  std::vector<ComplexPoly> sections;
  std::vector<std::int64_t> weights;
  int genus = 0;
  std::string label;

  friend bool operator==(const DegenerationConfig&, const DegenerationConfig&) = default;
};

struct GeometricConstants {
  double volume = 1.0;  ///< V
  double mu = 2.0;      ///< average scalar curvature

  friend bool operator==(const GeometricConstants&, const GeometricConstants&) = default;
};

enum class Chart { kStandard, kInfinity };

std::string_view chart_name(Chart chart) noexcept;

struct AnchorZero {
  Chart chart = Chart::kStandard;
  Complex location;  ///< coordinate in its chart, |location| <= 1
  int multiplicity = 0;

  friend bool operator==(const AnchorZero&, const AnchorZero&) = default;
};

struct LocalZeroData {
  Chart chart = Chart::kStandard;
  Complex location;
  int anchor_multiplicity = 0;
  std::vector<int> orders;            ///< p_j
  std::vector<Complex> leading;       ///< u_j
  std::vector<Rational> exponents;    ///< q_j
  NewtonDiagram diagram;
  /// Sections in the local coordinate s = (chart coordinate) - location,
  /// with Taylor coefficients below each order p_j set exactly to zero.
  std::vector<ComplexPoly> local_sections;
};

struct ZeroContribution {
  AnchorZero zero;
  Rational q0{0};
  Rational squared_sum{0};  ///< sum p_a^2 (m_a - m_{a+1})
  double mabuchi = 0.0;
  double futaki = 0.0;

  friend bool operator==(const ZeroContribution&, const ZeroContribution&) = default;
};

/// Coefficients of ln(1/|t|) in the asymptotics of the Mabuchi and Futaki
/// energies along the degeneration.
struct SlopePrediction {
  double futaki_coefficient = 0.0;
  double mabuchi_coefficient = 0.0;
  double futaki_global_term = 0.0;  ///< 2 a_N
  GeometricConstants constants;
  std::vector<ZeroContribution> per_zero;

  friend bool operator==(const SlopePrediction&, const SlopePrediction&) = default;
};

/// Checks every structural invariant of the config. Throws
/// DegreeExceedsLineBundle, WeightSumNonzero, AnchorNotMinimal, NotABasis or
/// InvalidConfig.
void validate_config(const DegenerationConfig& config);

/// V = d and mu = (2 - 2 genus) / V.
GeometricConstants geometric_constants(const DegenerationConfig& config);

/// Sections expressed in the given chart, each padded to length d+1.
std::vector<ComplexPoly> chart_sections(const DegenerationConfig& config, Chart chart);

/// q_j = a_j - a_N. Throws WeightSumNonzero or AnchorNotMinimal.
std::vector<Rational> weights_to_exponents(std::span<const std::int64_t> weights);

/// Every zero of the anchor on P^1. Roots with |z| <= 1 are reported in the
/// standard chart, the rest (including z = infinity) in the chart w = 1/z.
/// Multiplicities sum to d.
std::vector<AnchorZero> zeroes_of_anchor(const DegenerationConfig& config,
                                         double cluster_tol = kDefaultClusterTol);

LocalZeroData local_data(const DegenerationConfig& config, const AnchorZero& zero,
                         double cluster_tol = kDefaultClusterTol);

/// (1/V) (2 q_0 - mu sum p_a^2 (m_a - m_{a+1}))
double local_mabuchi_coefficient(const LocalZeroData& data, const GeometricConstants& consts);

/// (1/V) sum p_a^2 (m_a - m_{a+1})
double local_futaki_coefficient(const LocalZeroData& data, const GeometricConstants& consts);

SlopePrediction predict(const DegenerationConfig& config);
SlopePrediction predict(const DegenerationConfig& config, const GeometricConstants& consts);

}  // namespace kslope

#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kslope/diagram.hpp"
#include "kslope/error.hpp"
#include "kslope/predictor.hpp"
#include "kslope/sections.hpp"

namespace kslope {

// Conventions: every density below is taken with respect to Lebesgue measure
// dA = dx dy in the given chart, with the 1/pi normalisation that makes
// omega_FS integrate to 1 for O(1). Densities are 2-forms, so the same point
// seen from the other chart picks up |dz/dw|^2.

/// ln( sum |t|^{2a_j} |S_j|^2 / sum |S_j|^2 ). Only |t| is used; t in (0, 1].
double phi(const DegenerationConfig& config, double t, Chart chart, Complex z);

/// (1/pi) d/dz d/dzbar ln ||sigma_t S||^2. Throws DegenerateEmbedding where it
/// vanishes.
double omega_density(const DegenerationConfig& config, double t, Chart chart, Complex z);

/// Ric(omega_0) = -(1/pi) d/dz d/dzbar ln rho_0, evaluated as
/// (1/pi) (2 L[S] - L[W]) where L is the log-laplacian of a sum of squares and
/// W the family of pairwise Wronskians of the sections.
double ricci_density(const DegenerationConfig& config, Chart chart, Complex z);

/// Section family of one chart (or of a zero-centred local coordinate) plus
/// the family of its Wronskians, which carries the reference curvature.
class ChartFields {
 public:
  struct Reference {
    double log_sum = 0.0;
    double log_rho = 0.0;   ///< ln(d/dz d/dzbar ln |S|^2)
    Complex dlog;
    double ricci = 0.0;     ///< density of Ric(omega_0), with the 1/pi
  };

  explicit ChartFields(std::vector<ComplexPoly> polys);

  const SectionFamily& sections() const noexcept { return sections_; }
  Reference reference(Complex z) const;
  SectionFamily::Eval weighted(std::span<const double> log_weights, Complex z) const {
    return sections_.evaluate(log_weights, z);
  }

 private:
  SectionFamily sections_;
  SectionFamily wronskians_;
  std::vector<double> zero_weights_;
  std::vector<double> zero_wronskian_weights_;
};

struct GridParams {
  int angular_nodes = 64;
  int radial_nodes_per_decade = 48;
  double inner_margin = 1e-2;
  /// Smallest |t| the refinement is built for.
  double design_t_min = 1e-3;
  /// 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  friend bool operator==(const GridParams&, const GridParams&) = default;
};

/// One tensor-product patch of nodes sharing a coordinate system.
struct GridPatch {
  enum class Kind { kBackground, kZero };
  Kind kind = Kind::kBackground;
  Chart chart = Chart::kStandard;
  int zero_index = -1;
  Complex centre;            ///< zero location in its chart (kZero only)
  double outer_radius = 1.0;
  double inner_radius = 0.0;  ///< start of the log-radial range (kZero only)
  std::vector<Complex> nodes;  ///< in patch coordinates
  std::vector<double> weights; ///< dA weights, partition of unity applied
};

/// Quadrature nodes covering P^1: a polar background grid per chart and one
/// log-polar patch per anchor zero, glued by a partition of unity.
class QuadratureGrid {
 public:
  QuadratureGrid(const DegenerationConfig& config, const GridParams& params);

  const GridParams& params() const noexcept { return params_; }
  std::span<const GridPatch> patches() const noexcept { return patches_; }
  std::span<const LocalZeroData> zeros() const noexcept { return zeros_; }
  std::size_t node_count() const noexcept;

  /// Radial nodes of zero patch k that fall in |t|^{m_a} <= r < |t|^{m_{a+1}}.
  int radial_nodes_in_annulus(int zero_index, int alpha, double t) const;

  // Internal: patch evaluators and cached reference values, indexed like patches().
  const ChartFields& fields(std::size_t patch) const { return fields_[patch]; }
  std::span<const ChartFields::Reference> reference(std::size_t patch) const {
    return reference_[patch];
  }

 private:
  GridParams params_;
  std::vector<LocalZeroData> zeros_;
  std::vector<GridPatch> patches_;
  std::vector<ChartFields> fields_;
  std::vector<std::vector<ChartFields::Reference>> reference_;
  std::vector<std::vector<double>> patch_radii_;
};

struct EnergySample {
  double t = 1.0;
  double F0_direct = 0.0;  ///< -(1/2V) int phi (omega_0 + omega_t)
  double F0_via_J = 0.0;   ///< J - I0
  double J = 0.0;          ///< (1/(2 pi V)) int |d phi/dz|^2 dA
  double I0 = 0.0;         ///< (1/V) int phi omega_0
  double nu = 0.0;         ///< Mabuchi energy
  double volume = 0.0;     ///< int omega_t
  std::chrono::nanoseconds wall_time{0};
  std::optional<ErrorCode> error;
  std::string error_message;

  bool ok() const noexcept { return !error.has_value(); }

  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

/// Evaluates every functional at one |t| in a single pass over the grid.
/// Throws GridUnresolved when t is below the grid's design minimum and
/// DegenerateEmbedding when omega_t vanishes at a node.
EnergySample evaluate_energies(const DegenerationConfig& config, double t,
                               const QuadratureGrid& grid);
EnergySample evaluate_energies(const DegenerationConfig& config, Complex t,
                               const QuadratureGrid& grid);

double mabuchi_energy(const DegenerationConfig& config, double t, const QuadratureGrid& grid);
double futaki_direct(const DegenerationConfig& config, double t, const QuadratureGrid& grid);
double futaki_via_J(const DegenerationConfig& config, double t, const QuadratureGrid& grid);

/// int Ric(omega_0) over P^1; 2 - 2 genus = 2 for a valid config.
double ricci_total(const QuadratureGrid& grid);

/// Integral of |t|^{2 sum(q_j - q_a)} |z|^{2 sum(p_j - p_a)} dA / (2 pi |z|^2)
/// over |t|^{m_a} <= |z| < |t|^{m_{a+1}}, by Gauss-Legendre in ln|z|.
/// `points` are the (p_j, q_j) being compared with vertex a. For a = 0 the
/// inner radius is 0 and the integral only converges when
/// sum(p_j - p_0) > 0; otherwise DivergentAnnulus is thrown.
double annulus_oracle(std::span<const DiagramPoint> points, int alpha, double t,
                      const NewtonDiagram& diagram);

/// One EnergySample per t. t_schedule must be strictly decreasing in (0, 1].
/// A sample that fails records its error instead of aborting the run.
std::vector<EnergySample> sample(const DegenerationConfig& config,
                                 std::span<const double> t_schedule, const GridParams& params);
std::vector<EnergySample> sample(const DegenerationConfig& config,
                                 std::span<const double> t_schedule, const QuadratureGrid& grid);

/// Sum in a fixed binary-tree order.
double pairwise_sum(std::span<const double> values);

}  // namespace kslope

#pragma once

#include <span>
#include <vector>

#include "kslope/poly.hpp"

namespace kslope {

/// Represents sum_j exp(2 log_weights[j]) |polys[j](z)|^2.
struct WeightedSectionSum {
  std::vector<ComplexPoly> polys;
  std::vector<double> log_weights;
};

/// ln of the weighted sum, shifted by the largest term before exponentiating.
/// Throws AllTermsUnderflow when every term vanishes at z.
double log_sum(const WeightedSectionSum& s, Complex z);

/// d/dz d/dzbar ln(sum), from the closed form
///   sum_{j<k} w_j w_k |P_j P_k' - P_k P_j'|^2 / (sum_j w_j |P_j|^2)^2.
double log_laplacian(const WeightedSectionSum& s, Complex z);

/// The polynomials behind a WeightedSectionSum with their derivatives and
/// pairwise Wronskians precomputed, so repeated evaluation under different
/// weights is cheap.
class SectionFamily {
 public:
  struct Eval {
    double log_sum = 0.0;
    double log_laplacian_log = 0.0;  ///< ln of log_laplacian; -inf when it vanishes
    Complex dlog;                    ///< d/dz ln(sum)
  };

  explicit SectionFamily(std::vector<ComplexPoly> polys);

  std::size_t size() const noexcept { return polys_.size(); }
  std::span<const ComplexPoly> polys() const noexcept { return polys_; }
  /// W_{jk} for j < k, in row-major pair order.
  std::span<const ComplexPoly> wronskians() const noexcept { return wronskians_; }

  /// log_weights.size() must equal size(). Throws AllTermsUnderflow.
  Eval evaluate(std::span<const double> log_weights, Complex z) const;

 private:
  std::vector<ComplexPoly> polys_;
  std::vector<ComplexPoly> derivs_;
  std::vector<ComplexPoly> wronskians_;
};

}  // namespace kslope

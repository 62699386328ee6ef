#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace kslope {

using Complex = std::complex<double>;

/// Polynomial in one complex variable, c[k] multiplies z^k. The declared
/// length may exceed the effective degree (trailing zeros are kept so that a
/// section of O(d) can carry its line-bundle degree around).
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<Complex> coeffs);
  ComplexPoly(std::initializer_list<Complex> coeffs);

  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const Complex& operator[](std::size_t k) const { return coeffs_[k]; }

  /// Index of the last nonzero coefficient, -1 for the zero polynomial.
  int effective_degree() const noexcept;
  bool is_zero() const noexcept { return effective_degree() < 0; }
  /// max_k |c_k|; 0 for the zero polynomial.
  double max_abs_coeff() const noexcept;

  friend bool operator==(const ComplexPoly&, const ComplexPoly&) = default;

 private:
  std::vector<Complex> coeffs_;
};

/// A group of numerically coincident roots.
struct RootCluster {
  Complex location;
  int multiplicity = 0;
  double residual = 0.0;  ///< |p(z)| / sum |c_k| |z|^k, a relative backward error
};

/// Result of vanishing_order.
struct VanishingOrder {
  int order = 0;
  Complex leading;  ///< p^{(order)}(z0) / order!
};

inline constexpr double kDefaultClusterTol = 1e-8;

Complex eval(const ComplexPoly& p, Complex z);

ComplexPoly derivative(const ComplexPoly& p);

ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b);

/// a * b' - b * a', computed coefficientwise so that cancellations between
/// equal vanishing orders are exact.
ComplexPoly wronskian(const ComplexPoly& a, const ComplexPoly& b);

/// Representation of a section of O(d) in the chart w = 1/z:
/// w^d * p(1/w), i.e. the coefficient list reversed and padded to d+1.
/// Throws DegreeExceedsLineBundle when deg p > d.
ComplexPoly chart_swap(const ComplexPoly& p, int d);

/// Taylor coefficients of p about z0: p(z0 + s) = sum_k a_k s^k.
std::vector<Complex> taylor_coefficients(const ComplexPoly& p, Complex z0);

/// Smallest k with |p^{(k)}(z0)/k!| > tol * scale, where scale is the largest
/// Taylor coefficient of the absolute-value polynomial at |z0| (this reduces
/// to max |c_k| at z0 = 0). Throws ZeroPolynomial.
VanishingOrder vanishing_order(const ComplexPoly& p, Complex z0,
                               double tol = kDefaultClusterTol);

/// All roots of p grouped by multiplicity. Raw roots come from the companion
/// matrix; clusters are agglomerated only when the merged group passes a
/// vanishing-order check at its Newton-refined centre, then every cluster is
/// cross-checked against vanishing_order. Throws ZeroPolynomial and
/// RootClusterAmbiguity. Output is sorted by (real, imag).
std::vector<RootCluster> roots_with_multiplicity(
    const ComplexPoly& p, double cluster_tol = kDefaultClusterTol);

/// Newton iteration on p^{(m-1)}, which has a simple root where p has a root
/// of multiplicity m.
Complex refine_root(const ComplexPoly& p, Complex guess, int multiplicity);

}  // namespace kslope

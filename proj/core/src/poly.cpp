#include "kslope/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "kslope/error.hpp"

namespace kslope {

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {}

ComplexPoly::ComplexPoly(std::initializer_list<Complex> coeffs) : coeffs_(coeffs) {}

int ComplexPoly::effective_degree() const noexcept {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k) {
    if (coeffs_[k] != Complex{0.0, 0.0}) return k;
  }
  return -1;
}

double ComplexPoly::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Complex eval(const ComplexPoly& p, Complex z) {
  const auto c = p.coeffs();
  Complex acc{0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPoly derivative(const ComplexPoly& p) {
  const auto c = p.coeffs();
  if (c.size() <= 1) return ComplexPoly{Complex{0.0, 0.0}};
  std::vector<Complex> out(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) out[k - 1] = static_cast<double>(k) * c[k];
  return ComplexPoly(std::move(out));
}

ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b) {
  std::vector<Complex> out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] += b[k];
  return ComplexPoly(std::move(out));
}

ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.size() == 0 || b.size() == 0) return ComplexPoly{};
  std::vector<Complex> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return ComplexPoly(std::move(out));
}

ComplexPoly wronskian(const ComplexPoly& a, const ComplexPoly& b) {
  // coefficient of z^n is sum_{i+j=n+1} a_i b_j (j - i)
  const std::size_t len = std::max<std::size_t>(a.size() + b.size(), 3) - 2;
  std::vector<Complex> out(len);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (i == j || i + j == 0) continue;
      const double w = static_cast<double>(j) - static_cast<double>(i);
      out[i + j - 1] += w * a[i] * b[j];
    }
  }
  return ComplexPoly(std::move(out));
}

ComplexPoly chart_swap(const ComplexPoly& p, int d) {
  const int deg = p.effective_degree();
  if (deg > d) {
    throw Error(ErrorCode::kDegreeExceedsLineBundle,
                "degree " + std::to_string(deg) + " exceeds line bundle degree " +
                    std::to_string(d));
  }
  std::vector<Complex> out(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= deg; ++k) out[d - k] = p[k];
  return ComplexPoly(std::move(out));
}

std::vector<Complex> taylor_coefficients(const ComplexPoly& p, Complex z0) {
  std::vector<Complex> a(p.coeffs().begin(), p.coeffs().end());
  const std::size_t n = a.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t i = n - 1; i > k; --i) a[i - 1] += z0 * a[i];
  return a;
}

namespace {

// Largest Taylor coefficient of sum |c_k| z^k at |z0|: a bound on the
// rounding noise of every Taylor coefficient of p at z0.
double taylor_scale(const ComplexPoly& p, Complex z0) {
  std::vector<Complex> absc;
  absc.reserve(p.size());
  for (const auto& c : p.coeffs()) absc.emplace_back(std::abs(c), 0.0);
  double s = 0.0;
  for (const auto& b : taylor_coefficients(ComplexPoly(std::move(absc)), std::abs(z0)))
    s = std::max(s, b.real());
  return s;
}

// All Taylor coefficients below order m vanish to tolerance at z0.
bool vanishes_to_order(const ComplexPoly& p, Complex z0, int m, double tol) {
  const auto a = taylor_coefficients(p, z0);
  const double scale = taylor_scale(p, z0);
  for (int k = 0; k < m && k < static_cast<int>(a.size()); ++k)
    if (std::abs(a[k]) > tol * scale) return false;
  return true;
}

double relative_residual(const ComplexPoly& p, Complex z) {
  double denom = 0.0;
  double r = 1.0;
  for (const auto& c : p.coeffs()) {
    denom += std::abs(c) * r;
    r *= std::abs(z);
  }
  return denom > 0.0 ? std::abs(eval(p, z)) / denom : 0.0;
}

std::vector<Complex> companion_roots(const std::vector<Complex>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  if (n == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  std::vector<Complex> roots(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
  return roots;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
};

}  // namespace

VanishingOrder vanishing_order(const ComplexPoly& p, Complex z0, double tol) {
  if (p.is_zero()) throw Error(ErrorCode::kZeroPolynomial, "vanishing_order of the zero polynomial");
  const auto a = taylor_coefficients(p, z0);
  const double scale = taylor_scale(p, z0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k]) > tol * scale) return {static_cast<int>(k), a[k]};
  }
  // Only reachable for absurd tolerances (>= 1).
  const int deg = p.effective_degree();
  return {deg, a[deg]};
}

Complex refine_root(const ComplexPoly& p, Complex guess, int multiplicity) {
  ComplexPoly f = p;
  for (int k = 1; k < multiplicity; ++k) f = derivative(f);
  const ComplexPoly df = derivative(f);
  Complex z = guess;
  double best = std::abs(eval(f, z));
  Complex best_z = z;
  for (int iter = 0; iter < 60 && best > 0.0; ++iter) {
    const Complex fz = eval(f, z);
    const Complex dz = eval(df, z);
    if (dz == Complex{0.0, 0.0}) break;
    const Complex step = fz / dz;
    z -= step;
    const double v = std::abs(eval(f, z));
    if (v < best) {
      best = v;
      best_z = z;
    }
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(z)))
      break;
  }
  return best_z;
}

std::vector<RootCluster> roots_with_multiplicity(const ComplexPoly& p, double cluster_tol) {
  const int deg = p.effective_degree();
  if (deg < 0) throw Error(ErrorCode::kZeroPolynomial, "roots of the zero polynomial");

  const double scale = p.max_abs_coeff();
  std::vector<Complex> norm(static_cast<std::size_t>(deg) + 1);
  for (int k = 0; k <= deg; ++k) norm[k] = p[k] / scale;
  const ComplexPoly normalized(norm);

  // Exact zeros at the origin are peeled off before the eigen-solve.
  int origin_order = 0;
  while (norm[origin_order] == Complex{0.0, 0.0}) ++origin_order;
  const ComplexPoly reduced(std::vector<Complex>(norm.begin() + origin_order, norm.end()));

  std::vector<Complex> raw = companion_roots({norm.begin() + origin_order, norm.end()});
  for (auto& z : raw) z = refine_root(reduced, z, 1);

  const std::size_t n = raw.size();
  DisjointSets sets(n);
  std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({std::abs(raw[i] - raw[j]), {i, j}});
  std::sort(pairs.begin(), pairs.end());

  auto members_of = [&](std::size_t root) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < n; ++k)
      if (sets.find(k) == root) out.push_back(k);
    return out;
  };
  auto centre_of = [&](const std::vector<std::size_t>& members) {
    Complex mean{0.0, 0.0};
    for (auto k : members) mean += raw[k];
    mean /= static_cast<double>(members.size());
    return refine_root(reduced, mean, static_cast<int>(members.size()));
  };

  for (const auto& [dist, ij] : pairs) {
    const auto [i, j] = ij;
    const std::size_t ri = sets.find(i);
    const std::size_t rj = sets.find(j);
    if (ri == rj) continue;
    if (dist > 1e-2 * std::max({1.0, std::abs(raw[i]), std::abs(raw[j])})) break;
    auto merged = members_of(ri);
    const auto other = members_of(rj);
    merged.insert(merged.end(), other.begin(), other.end());
    const Complex c = centre_of(merged);
    if (vanishes_to_order(reduced, c, static_cast<int>(merged.size()), cluster_tol))
      sets.parent[rj] = ri;
  }

  std::vector<RootCluster> clusters;
  if (origin_order > 0) clusters.push_back({Complex{0.0, 0.0}, origin_order, 0.0});
  for (std::size_t k = 0; k < n; ++k) {
    if (sets.find(k) != k) continue;
    const auto members = members_of(k);
    const Complex c = centre_of(members);
    const int m = static_cast<int>(members.size());
    const auto check = vanishing_order(normalized, c, cluster_tol);
    if (check.order != m) {
      throw Error(ErrorCode::kRootClusterAmbiguity,
                  "cluster of " + std::to_string(m) + " roots has vanishing order " +
                      std::to_string(check.order));
    }
    clusters.push_back({c, m, relative_residual(normalized, c)});
  }

  for (std::size_t a = 0; a < clusters.size(); ++a) {
    for (std::size_t b = a + 1; b < clusters.size(); ++b) {
      if (std::abs(clusters[a].location - clusters[b].location) < 10.0 * cluster_tol) {
        throw Error(ErrorCode::kRootClusterAmbiguity, "distinct root clusters closer than 10*cluster_tol");
      }
    }
  }

  std::sort(clusters.begin(), clusters.end(), [](const RootCluster& x, const RootCluster& y) {
    if (x.location.real() != y.location.real()) return x.location.real() < y.location.real();
    return x.location.imag() < y.location.imag();
  });
  return clusters;
}

}  // namespace kslope

#include "kslope/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kslope/error.hpp"

namespace kslope {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs2(Complex v) {
  const double a = std::abs(v);
  return a > 0.0 ? 2.0 * std::log(a) : kNegInf;
}

}  // namespace

SectionFamily::SectionFamily(std::vector<ComplexPoly> polys) : polys_(std::move(polys)) {
  derivs_.reserve(polys_.size());
  for (const auto& p : polys_) derivs_.push_back(derivative(p));
  for (std::size_t j = 0; j < polys_.size(); ++j)
    for (std::size_t k = j + 1; k < polys_.size(); ++k)
      wronskians_.push_back(wronskian(polys_[j], polys_[k]));
}

SectionFamily::Eval SectionFamily::evaluate(std::span<const double> log_weights, Complex z) const {
  const std::size_t n = polys_.size();
  if (log_weights.size() != n) throw std::invalid_argument("log_weights size mismatch");
  thread_local std::vector<double> terms;
  thread_local std::vector<Complex> values;
  terms.resize(n);
  values.resize(n);

  double top = kNegInf;
  for (std::size_t j = 0; j < n; ++j) {
    values[j] = eval(polys_[j], z);
    terms[j] = 2.0 * log_weights[j] + log_abs2(values[j]);
    top = std::max(top, terms[j]);
  }
  if (top == kNegInf) {
    throw Error(ErrorCode::kAllTermsUnderflow, "every term of the section sum vanishes");
  }

  double shifted = 0.0;
  Complex dnum{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    if (terms[j] == kNegInf) continue;
    const double e = std::exp(terms[j] - top);
    shifted += e;
    dnum += e * (eval(derivs_[j], z) / values[j]);
  }
  Eval out;
  out.log_sum = top + std::log(shifted);
  out.dlog = dnum / shifted;

  // numerator terms are bounded by exp(2 * top) times |z|-dependent factors,
  // so shift them by their own maximum
  double wtop = kNegInf;
  std::size_t pair = 0;
  thread_local std::vector<double> wterms;
  wterms.resize(wronskians_.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k, ++pair) {
      wterms[pair] = 2.0 * (log_weights[j] + log_weights[k]) + log_abs2(eval(wronskians_[pair], z));
      wtop = std::max(wtop, wterms[pair]);
    }
  }
  if (wtop == kNegInf) {
    out.log_laplacian_log = kNegInf;
  } else {
    double wsum = 0.0;
    for (double w : wterms)
      if (w != kNegInf) wsum += std::exp(w - wtop);
    out.log_laplacian_log = wtop + std::log(wsum) - 2.0 * out.log_sum;
  }
  return out;
}

double log_sum(const WeightedSectionSum& s, Complex z) {
  return SectionFamily(s.polys).evaluate(s.log_weights, z).log_sum;
}

double log_laplacian(const WeightedSectionSum& s, Complex z) {
  return std::exp(SectionFamily(s.polys).evaluate(s.log_weights, z).log_laplacian_log);
}

}  // namespace kslope

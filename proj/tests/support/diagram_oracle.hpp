#pragma once

// Brute-force Newton diagram used as a test oracle. A point is a vertex of
// the hull of upper quadrants iff no convex combination of two other points
// lies weakly below-left of it. Everything is exact.

#include <algorithm>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "kslope/diagram.hpp"

namespace oracle {

using kslope::Rational;

struct Staircase {
  std::vector<std::pair<int, Rational>> vertices;
  std::vector<Rational> slopes;
};

// Is some lambda*a + (1-lambda)*b <= v componentwise, lambda in [0, 1]?
inline bool dominated_by_segment(const std::pair<int, Rational>& a,
                                 const std::pair<int, Rational>& b,
                                 const std::pair<int, Rational>& v) {
  Rational lo(0), hi(1);
  // lambda * (x_a - x_b) <= v_x - x_b
  auto clip = [&](const Rational& coeff, const Rational& rhs) {
    if (coeff == Rational(0)) {
      if (rhs < Rational(0)) hi = Rational(-1);
      return;
    }
    const Rational bound = rhs / coeff;
    if (coeff > Rational(0)) {
      hi = std::min(hi, bound);
    } else {
      lo = std::max(lo, bound);
    }
  };
  clip(Rational(a.first - b.first), Rational(v.first - b.first));
  clip(a.second - b.second, v.second - b.second);
  return lo <= hi;
}

inline Staircase brute_force(std::span<const kslope::DiagramPoint> points) {
  std::set<std::pair<int, Rational>> unique;
  for (const auto& pt : points) unique.emplace(pt.p, pt.q);
  const std::vector<std::pair<int, Rational>> pts(unique.begin(), unique.end());

  Staircase out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool extreme = true;
    for (std::size_t a = 0; a < pts.size() && extreme; ++a) {
      if (a == i) continue;
      for (std::size_t b = a; b < pts.size() && extreme; ++b) {
        if (b == i) continue;
        if (dominated_by_segment(pts[a], pts[b], pts[i])) extreme = false;
      }
    }
    if (extreme) out.vertices.push_back(pts[i]);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  for (std::size_t k = 1; k < out.vertices.size(); ++k) {
    const auto& [p0, q0] = out.vertices[k - 1];
    const auto& [p1, q1] = out.vertices[k];
    out.slopes.push_back((q0 - q1) / Rational(p1 - p0));
  }
  return out;
}

inline bool matches(const kslope::NewtonDiagram& d, const Staircase& s) {
  if (d.vertices.size() != s.vertices.size() || d.slopes != s.slopes) return false;
  for (std::size_t k = 0; k < s.vertices.size(); ++k)
    if (d.vertices[k].p != s.vertices[k].first || d.vertices[k].q != s.vertices[k].second)
      return false;
  return true;
}

}  // namespace oracle

#include "kslope/diagram.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "kslope/error.hpp"

namespace kslope {

namespace {

// Cross product sign of (b - a) x (c - a); > 0 means c lies strictly above
// the line through a and b when a.p < b.p.
Rational cross(const Vertex& a, const Vertex& b, const Vertex& c) {
  const Rational bp(b.p - a.p), cp(c.p - a.p);
  return bp * (c.q - a.q) - (b.q - a.q) * cp;
}

}  // namespace

Rational NewtonDiagram::slope(int a) const {
  if (a == 0) throw std::out_of_range("m_0 is +infinity");
  if (a == num_faces() + 1) return Rational(0);
  return slopes.at(static_cast<std::size_t>(a - 1));
}

NewtonDiagram build_diagram(std::span<const DiagramPoint> points) {
  const bool has_q_axis = std::any_of(points.begin(), points.end(),
                                      [](const DiagramPoint& pt) { return pt.p == 0; });
  if (!has_q_axis) throw Error(ErrorCode::kMissingQAxisPoint, "no point with p = 0");
  const bool has_p_axis = std::any_of(points.begin(), points.end(),
                                      [](const DiagramPoint& pt) { return pt.q == Rational(0); });
  if (!has_p_axis) throw Error(ErrorCode::kMissingPAxisPoint, "no point with q = 0");

  // Deduplicate, then keep the Pareto-minimal points (strictly decreasing q as
  // p increases). Everything else is dominated and cannot be extreme.
  std::map<std::pair<int, Rational>, double> distinct;
  for (const auto& pt : points) {
    if (pt.p < 0 || pt.q < Rational(0)) throw Error(ErrorCode::kInvalidConfig, "negative diagram coordinate");
    distinct[{pt.p, pt.q}] += pt.mass;
  }
  std::vector<Vertex> pareto;
  for (const auto& [key, mass] : distinct) {
    const Vertex v{key.first, key.second};
    if (pareto.empty() || v.q < pareto.back().q) pareto.push_back(v);
  }

  // Lower hull, dropping collinear middle points.
  std::vector<Vertex> hull;
  for (const auto& v : pareto) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), v) <= Rational(0)) hull.pop_back();
    hull.push_back(v);
  }

  NewtonDiagram out;
  out.vertices = hull;
  for (std::size_t a = 1; a < hull.size(); ++a) {
    out.slopes.push_back((hull[a - 1].q - hull[a].q) / Rational(hull[a].p - hull[a - 1].p));
  }
  out.vertex_masses.reserve(hull.size());
  for (const auto& v : hull) out.vertex_masses.push_back(distinct.at({v.p, v.q}));

  const int m = out.num_faces();
  out.placement.reserve(points.size());
  for (const auto& pt : points) {
    Placement place;
    for (int a = 0; a <= m && place.kind == Placement::Kind::kInterior; ++a) {
      const auto& v = hull[a];
      if (pt.p == v.p && pt.q == v.q) place = {Placement::Kind::kVertex, a};
    }
    if (place.kind == Placement::Kind::kInterior) {
      if (pt.p == hull.front().p && pt.q > hull.front().q) {
        place = {Placement::Kind::kFace, 0};
      } else if (pt.q == hull.back().q && pt.p > hull.back().p) {
        place = {Placement::Kind::kFace, m + 1};
      } else {
        for (int a = 1; a <= m; ++a) {
          const auto& lo = hull[a - 1];
          const auto& hi = hull[a];
          if (pt.p > lo.p && pt.p < hi.p && cross(lo, hi, Vertex{pt.p, pt.q}) == Rational(0)) {
            place = {Placement::Kind::kFace, a};
            break;
          }
        }
      }
    }
    out.placement.push_back(place);
  }
  return out;
}

Rational q_axis_intercept(const NewtonDiagram& diagram) {
  return diagram.vertices.front().q;
}

Rational slope_sum_identity_check(const NewtonDiagram& diagram) {
  Rational sum(0);
  for (int a = 1; a <= diagram.num_faces(); ++a) {
    sum += Rational(diagram.vertices[a].p) * (diagram.slope(a) - diagram.slope(a + 1));
  }
  return sum;
}

Rational squared_order_slope_sum(const NewtonDiagram& diagram) {
  Rational sum(0);
  for (int a = 1; a <= diagram.num_faces(); ++a) {
    const Rational p(diagram.vertices[a].p);
    sum += p * p * (diagram.slope(a) - diagram.slope(a + 1));
  }
  return sum;
}

}  // namespace kslope

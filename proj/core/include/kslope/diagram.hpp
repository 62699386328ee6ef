#pragma once

#include <span>
#include <vector>

#include "kslope/rational.hpp"

namespace kslope {

/// One (p, q) point: p is a vanishing order, q a weight exponent.
struct DiagramPoint {
  int p = 0;
  Rational q{0};
  double mass = 1.0;  ///< |u_j|^2
};

struct Vertex {
  int p = 0;
  Rational q{0};
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Where an input point sits relative to the staircase.
///
/// Faces are indexed like slopes: face a joins V_{a-1} to V_a and has slope
/// m_a. Face 0 is the vertical ray above V_0 (m_0 = +inf) and face M+1 the
/// horizontal ray right of V_M (m_{M+1} = 0).
struct Placement {
  enum class Kind { kVertex, kFace, kInterior };
  Kind kind = Kind::kInterior;
  int index = -1;  ///< vertex or face index; -1 for interior points
  friend bool operator==(const Placement&, const Placement&) = default;
};

/// Newton diagram: the convex hull of the union of upper quadrants
/// {p >= p_j, q >= q_j}, stored as its staircase of vertices.
struct NewtonDiagram {
  std::vector<Vertex> vertices;        ///< V_0..V_M, p increasing, q decreasing
  std::vector<Rational> slopes;        ///< m_1..m_M, strictly decreasing, > 0
  std::vector<double> vertex_masses;   ///< sum of masses at each vertex
  std::vector<Placement> placement;    ///< one entry per input point

  int num_faces() const noexcept { return static_cast<int>(slopes.size()); }

  /// m_a with the sentinel m_{M+1} = 0. For a = 0 (m_0 = +inf) use
  /// has_infinite_slope(); slope(0) throws.
  Rational slope(int a) const;
  static bool has_infinite_slope(int a) noexcept { return a == 0; }
};

/// Throws MissingQAxisPoint (no point with p = 0) or MissingPAxisPoint (no
/// point with q = 0).
NewtonDiagram build_diagram(std::span<const DiagramPoint> points);

/// q_0, the height of the vertex on the q-axis.
Rational q_axis_intercept(const NewtonDiagram& diagram);

/// sum_{a=1}^{M} p_a (m_a - m_{a+1}); equals q_axis_intercept exactly.
Rational slope_sum_identity_check(const NewtonDiagram& diagram);

/// sum_{a=1}^{M} p_a^2 (m_a - m_{a+1}).
Rational squared_order_slope_sum(const NewtonDiagram& diagram);

}  // namespace kslope

#pragma once

#include <vector>

#include "ucflow/mesh.hpp"

namespace ucflow {

/// Quadrature on the reference triangle {x >= 0, y >= 0, x + y <= 1}.
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

/// Gauss rule on [0, 1]; weights sum to 1.
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] int size() const { return static_cast<int>(weights.size()); }
};

inline constexpr int kMaxTriangleDegree = 10;

/// Fully symmetric rule with positive weights, exact for polynomials of
/// total degree <= `degree` (1..10). Rules are built once and cached.
const QuadratureRule& triangle_rule(int degree);

/// n-point Gauss-Legendre rule with 2n - 1 >= degree. degree >= 1.
LineRule edge_rule(int degree);

}  // namespace ucflow

#pragma once

#include <array>
#include <vector>

#include "ucflow/mesh.hpp"
#include "ucflow/quadrature.hpp"

namespace ucflow {

inline constexpr int kMaxOrder = 4;

/// Hessian stored as (xx, xy, yy).
using Hessian = std::array<double, 3>;
using Gradient = std::array<double, 2>;

/// Where a local node sits on the reference triangle.
struct NodeLocation {
  enum class Kind { Vertex, Edge, Interior } kind = Kind::Vertex;
  /// Vertex: local vertex index. Edge: local edge (opposite local vertex).
  /// Interior: running interior index.
  int index = 0;
  /// Edge nodes only: position 1..k-1 counted from vertex (index+1)%3.
  int position = 0;
};

/// P_k Lagrange element on the reference triangle with nodes on the
/// equispaced barycentric lattice. Node order: the three vertices, then edge
/// nodes edge by edge (edge l joins vertices l+1 and l+2), then interior
/// nodes.
class ReferenceElement {
 public:
  explicit ReferenceElement(int order);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] const std::vector<Point>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<NodeLocation>& locations() const { return locations_; }

  void values(const Point& x, double* out) const;
  void gradients(const Point& x, Gradient* out) const;
  void hessians(const Point& x, Hessian* out) const;

 private:
  int order_;
  std::vector<Point> nodes_;
  std::vector<NodeLocation> locations_;
  std::vector<std::array<int, 2>> exponents_;
  // coeffs_[m * n + i]: coefficient of monomial m in basis function i.
  std::vector<double> coeffs_;
};

/// Shared, lazily built element for order 1..kMaxOrder.
const ReferenceElement& reference_element(int order);

/// Basis evaluation at one reference point. derivative_order 0 returns one
/// value per basis function, 1 returns (dx, dy) pairs, 2 returns
/// (xx, xy, yy) triples. Throws std::invalid_argument otherwise.
std::vector<double> eval_basis(const ReferenceElement& element, const Point& x, int derivative_order);

/// Reference basis data at the points of a quadrature rule.
struct Tabulation {
  int num_points = 0;
  int num_basis = 0;
  std::vector<double> values;      // [q * num_basis + i]
  std::vector<Gradient> gradients;
  std::vector<Hessian> hessians;
};

Tabulation tabulate(const ReferenceElement& element, const std::vector<Point>& points);

}  // namespace ucflow

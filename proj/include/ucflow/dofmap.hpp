#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ucflow/lagrange.hpp"
#include "ucflow/mesh.hpp"

namespace ucflow {

/// Continuous P_k node numbering on a mesh: vertices first, then edge
/// nodes face by face, then element interiors.
class ScalarNodes {
 public:
  ScalarNodes(const Mesh& mesh, int order);

  [[nodiscard]] int order() const { return order_; }
  [[nodiscard]] int num_nodes() const { return static_cast<int>(coords_.size()); }
  [[nodiscard]] int nodes_per_element() const { return per_element_; }
  [[nodiscard]] const Point& coord(int node) const { return coords_[node]; }
  [[nodiscard]] bool on_boundary(int node) const { return boundary_[node]; }
  [[nodiscard]] const int* element_nodes(int e) const { return &element_nodes_[static_cast<std::size_t>(e) * per_element_]; }

 private:
  int order_;
  int per_element_;
  std::vector<Point> coords_;
  std::vector<bool> boundary_;
  std::vector<int> element_nodes_;
};

/// DOF numbering of one field (scalar or 2-vector) inside the global system.
/// Vector components are interleaved: dof(node, c) = offset + 2 * free + c.
class DofMap {
 public:
  DofMap() = default;
  DofMap(std::shared_ptr<const ScalarNodes> nodes, int components, bool dirichlet, bool zero_mean);

  [[nodiscard]] const ScalarNodes& nodes() const { return *nodes_; }
  [[nodiscard]] int order() const { return nodes_->order(); }
  [[nodiscard]] int components() const { return components_; }
  [[nodiscard]] bool dirichlet() const { return dirichlet_; }
  [[nodiscard]] bool zero_mean() const { return zero_mean_; }
  /// Number of unconstrained DOFs of this field.
  [[nodiscard]] int size() const { return components_ * num_free_; }
  [[nodiscard]] int offset() const { return offset_; }
  void set_offset(int offset) { offset_ = offset; }

  /// Index relative to the field start, or -1 for an eliminated node.
  [[nodiscard]] int local_dof(int node, int component) const {
    const int f = free_[node];
    return f < 0 ? -1 : components_ * f + component;
  }
  /// Global index, or -1 for an eliminated node.
  [[nodiscard]] int dof(int node, int component) const {
    const int l = local_dof(node, component);
    return l < 0 ? -1 : offset_ + l;
  }
  [[nodiscard]] bool constrained(int node) const { return free_[node] < 0; }

 private:
  std::shared_ptr<const ScalarNodes> nodes_;
  int components_ = 1;
  bool dirichlet_ = false;
  bool zero_mean_ = false;
  int offset_ = 0;
  int num_free_ = 0;
  std::vector<int> free_;
};

enum class OrderPreset { Equal, Minimal };

/// Polynomial orders: primal velocity k, dual velocity k1, primal pressure
/// k2, dual pressure k3.
struct Orders {
  int k = 1;
  int k1 = 1;
  int k2 = 1;
  int k3 = 1;

  static Orders from_preset(int k, OrderPreset preset);
};

OrderPreset parse_preset(const std::string& name);
std::string to_string(OrderPreset preset);

/// The four discrete fields plus the zero-mean multiplier of the primal
/// pressure, laid out as [u | p | z | y | lambda].
class FeSystem {
 public:
  FeSystem(const Mesh& mesh, Orders orders);

  [[nodiscard]] const Orders& orders() const { return orders_; }
  [[nodiscard]] const DofMap& velocity() const { return velocity_; }
  [[nodiscard]] const DofMap& pressure() const { return pressure_; }
  [[nodiscard]] const DofMap& dual_velocity() const { return dual_velocity_; }
  [[nodiscard]] const DofMap& dual_pressure() const { return dual_pressure_; }
  [[nodiscard]] int multiplier() const { return multiplier_; }
  [[nodiscard]] int size() const { return multiplier_ + 1; }

 private:
  Orders orders_;
  DofMap velocity_;
  DofMap pressure_;
  DofMap dual_velocity_;
  DofMap dual_pressure_;
  int multiplier_ = 0;
};

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<std::array<double, 2>(const Point&)>;

/// Nodal interpolation; returns coefficients in field-local numbering.
/// Eliminated nodes are skipped.
Eigen::VectorXd interpolate(const DofMap& dofs, const ScalarField& field);
Eigen::VectorXd interpolate(const DofMap& dofs, const VectorField& field);

/// Copies a field-local coefficient vector into its slot of a global vector.
void scatter(const DofMap& dofs, const Eigen::VectorXd& local, Eigen::VectorXd& global);
Eigen::VectorXd gather(const DofMap& dofs, const Eigen::VectorXd& global);

/// Affine map of one element: x = origin + jacobian * xi.
struct ElementMap {
  Point origin{};
  std::array<double, 4> jacobian{};  // row-major
  std::array<double, 4> inverse{};   // row-major
  double det = 0.0;

  ElementMap() = default;
  explicit ElementMap(const std::array<Point, 3>& p);

  [[nodiscard]] Point to_physical(const Point& xi) const {
    return {origin[0] + jacobian[0] * xi[0] + jacobian[1] * xi[1],
            origin[1] + jacobian[2] * xi[0] + jacobian[3] * xi[1]};
  }
  [[nodiscard]] Point to_reference(const Point& x) const {
    const double dx = x[0] - origin[0], dy = x[1] - origin[1];
    return {inverse[0] * dx + inverse[1] * dy, inverse[2] * dx + inverse[3] * dy};
  }
  /// Physical gradient from a reference gradient: J^{-T} g.
  [[nodiscard]] Gradient gradient(const Gradient& g) const {
    return {inverse[0] * g[0] + inverse[2] * g[1], inverse[1] * g[0] + inverse[3] * g[1]};
  }
  /// Physical Hessian: J^{-T} H J^{-1}.
  [[nodiscard]] Hessian hessian(const Hessian& h) const;
};

}  // namespace ucflow

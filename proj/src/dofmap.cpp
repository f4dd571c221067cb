#include "ucflow/dofmap.hpp"

#include <algorithm>
#include <stdexcept>

namespace ucflow {

ScalarNodes::ScalarNodes(const Mesh& mesh, int order) : order_(order) {
  const ReferenceElement& ref = reference_element(order);
  per_element_ = ref.num_nodes();
  const int k = order;
  const int nv = mesh.num_vertices();
  const int nf = mesh.num_faces();
  const int per_edge = k - 1;
  const int per_cell = (k - 1) * (k - 2) / 2;
  const int total = nv + per_edge * nf + per_cell * mesh.num_elements();

  coords_.assign(total, Point{0.0, 0.0});
  boundary_.assign(total, false);
  element_nodes_.resize(static_cast<std::size_t>(mesh.num_elements()) * per_element_);

  for (int v = 0; v < nv; ++v) {
    coords_[v] = mesh.vertices()[v];
    boundary_[v] = mesh.boundary_vertex_flags()[v];
  }

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& tri = mesh.elements()[e];
    const ElementMap map(mesh.element_points(e));
    int* out = &element_nodes_[static_cast<std::size_t>(e) * per_element_];
    for (int i = 0; i < per_element_; ++i) {
      const NodeLocation& loc = ref.locations()[i];
      int node = 0;
      switch (loc.kind) {
        case NodeLocation::Kind::Vertex:
          node = tri[loc.index];
          break;
        case NodeLocation::Kind::Edge: {
          const int face = mesh.element_faces()[e][loc.index];
          const int start = tri[(loc.index + 1) % 3];
          const int pos = start == mesh.faces()[face].vertices[0] ? loc.position : k - loc.position;
          node = nv + per_edge * face + (pos - 1);
          boundary_[node] = !mesh.faces()[face].interior();
          break;
        }
        case NodeLocation::Kind::Interior:
          node = nv + per_edge * nf + per_cell * e + loc.index;
          break;
      }
      coords_[node] = map.to_physical(ref.nodes()[i]);
      out[i] = node;
    }
  }
}

DofMap::DofMap(std::shared_ptr<const ScalarNodes> nodes, int components, bool dirichlet, bool zero_mean)
    : nodes_(std::move(nodes)), components_(components), dirichlet_(dirichlet), zero_mean_(zero_mean) {
  free_.assign(nodes_->num_nodes(), -1);
  for (int n = 0; n < nodes_->num_nodes(); ++n) {
    if (dirichlet_ && nodes_->on_boundary(n)) continue;
    free_[n] = num_free_++;
  }
}

Orders Orders::from_preset(int k, OrderPreset preset) {
  if (k < 1 || k > kMaxOrder) throw std::invalid_argument("order k must be in [1, 4]");
  if (preset == OrderPreset::Equal) return {k, k, k, k};
  return {k, 1, std::max(k - 1, 1), 1};
}

OrderPreset parse_preset(const std::string& name) {
  if (name == "equal") return OrderPreset::Equal;
  if (name == "minimal") return OrderPreset::Minimal;
  throw std::invalid_argument("unknown order preset '" + name + "' (expected equal|minimal)");
}

std::string to_string(OrderPreset preset) { return preset == OrderPreset::Equal ? "equal" : "minimal"; }

namespace {

std::shared_ptr<const ScalarNodes> nodes_for(const Mesh& mesh, int order,
                                             std::array<std::shared_ptr<const ScalarNodes>, kMaxOrder>& cache) {
  auto& slot = cache.at(order - 1);
  if (!slot) slot = std::make_shared<const ScalarNodes>(mesh, order);
  return slot;
}

DofMap placed(DofMap map, int& offset) {
  map.set_offset(offset);
  offset += map.size();
  return map;
}

}  // namespace

FeSystem::FeSystem(const Mesh& mesh, Orders orders) : orders_(orders) {
  for (int order : {orders.k, orders.k1, orders.k2, orders.k3}) {
    if (order < 1 || order > kMaxOrder) throw std::invalid_argument("FeSystem: orders must be in [1, 4]");
  }
  std::array<std::shared_ptr<const ScalarNodes>, kMaxOrder> cache;
  int offset = 0;
  velocity_ = placed(DofMap(nodes_for(mesh, orders.k, cache), 2, false, false), offset);
  pressure_ = placed(DofMap(nodes_for(mesh, orders.k2, cache), 1, false, true), offset);
  dual_velocity_ = placed(DofMap(nodes_for(mesh, orders.k1, cache), 2, true, false), offset);
  dual_pressure_ = placed(DofMap(nodes_for(mesh, orders.k3, cache), 1, false, false), offset);
  multiplier_ = offset;
}

Eigen::VectorXd interpolate(const DofMap& dofs, const ScalarField& field) {
  if (dofs.components() != 1) throw std::invalid_argument("interpolate: scalar field on a vector space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs.size());
  const ScalarNodes& nodes = dofs.nodes();
  for (int n = 0; n < nodes.num_nodes(); ++n) {
    const int l = dofs.local_dof(n, 0);
    if (l >= 0) c[l] = field(nodes.coord(n));
  }
  return c;
}

Eigen::VectorXd interpolate(const DofMap& dofs, const VectorField& field) {
  if (dofs.components() != 2) throw std::invalid_argument("interpolate: vector field on a scalar space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dofs.size());
  const ScalarNodes& nodes = dofs.nodes();
  for (int n = 0; n < nodes.num_nodes(); ++n) {
    const int l = dofs.local_dof(n, 0);
    if (l < 0) continue;
    const auto v = field(nodes.coord(n));
    c[l] = v[0];
    c[l + 1] = v[1];
  }
  return c;
}

void scatter(const DofMap& dofs, const Eigen::VectorXd& local, Eigen::VectorXd& global) {
  if (local.size() != dofs.size()) throw std::invalid_argument("scatter: size mismatch");
  global.segment(dofs.offset(), dofs.size()) = local;
}

Eigen::VectorXd gather(const DofMap& dofs, const Eigen::VectorXd& global) {
  return global.segment(dofs.offset(), dofs.size());
}

ElementMap::ElementMap(const std::array<Point, 3>& p) : origin(p[0]) {
  jacobian = {p[1][0] - p[0][0], p[2][0] - p[0][0], p[1][1] - p[0][1], p[2][1] - p[0][1]};
  det = jacobian[0] * jacobian[3] - jacobian[1] * jacobian[2];
  if (det == 0.0) throw std::invalid_argument("ElementMap: degenerate element");
  inverse = {jacobian[3] / det, -jacobian[1] / det, -jacobian[2] / det, jacobian[0] / det};
}

Hessian ElementMap::hessian(const Hessian& h) const {
  // G = J^{-1}; result = G^T H G.
  const double g00 = inverse[0], g01 = inverse[1], g10 = inverse[2], g11 = inverse[3];
  const double hxx = h[0], hxy = h[1], hyy = h[2];
  // H G
  const double a00 = hxx * g00 + hxy * g10, a01 = hxx * g01 + hxy * g11;
  const double a10 = hxy * g00 + hyy * g10, a11 = hxy * g01 + hyy * g11;
  return {g00 * a00 + g10 * a10, g00 * a01 + g10 * a11, g01 * a01 + g11 * a11};
}

}  // namespace ucflow

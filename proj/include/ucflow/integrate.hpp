#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <optional>

#include "ucflow/dofmap.hpp"
#include "ucflow/mesh.hpp"

namespace ucflow {

/// Volume quadrature degree used for an element of velocity order k.
inline int volume_degree(int k) { return std::min(2 * k + 2, kMaxTriangleDegree); }
inline int face_degree(int k) { return 2 * k; }

/// Value of a discrete field (field-local coefficients) at a reference
/// point of element e. Eliminated nodes contribute zero.
std::array<double, 2> evaluate_vector(const DofMap& dofs, const Eigen::VectorXd& coeffs, int e, const Point& xi);
double evaluate_scalar(const DofMap& dofs, const Eigen::VectorXd& coeffs, int e, const Point& xi);

/// Integrals of |a - b|^2 over the quadrature points inside `region`
/// (whole mesh when no region is given). Either side may be absent, which
/// means zero.
struct VectorSource {
  const DofMap* dofs = nullptr;
  const Eigen::VectorXd* coeffs = nullptr;
  const VectorField* field = nullptr;
};

double l2_distance_squared(const Mesh& mesh, const VectorSource& a, const VectorSource& b, const Region* region,
                           int degree);

struct ScalarSource {
  const DofMap* dofs = nullptr;
  const Eigen::VectorXd* coeffs = nullptr;
  const ScalarField* field = nullptr;
};

double l2_distance_squared(const Mesh& mesh, const ScalarSource& a, const ScalarSource& b, const Region* region,
                           int degree);

/// Sum of quadrature weights (physical) of points inside the region.
double region_measure(const Mesh& mesh, const Region& region, int degree);

}  // namespace ucflow

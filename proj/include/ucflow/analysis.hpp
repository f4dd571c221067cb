#pragma once

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ucflow/dofmap.hpp"
#include "ucflow/mesh.hpp"
#include "ucflow/solver.hpp"

namespace ucflow {

/// (int_R |u - u_h|^2)^{1/2} / (int_R |u|^2)^{1/2} over the quadrature points
/// inside `region` (whole mesh when null). Throws std::domain_error when the
/// exact field vanishes on the region.
double error_L2(const Mesh& mesh, const Region* region, const VectorField& exact, const DofMap& dofs,
                const Eigen::VectorXd& coeffs, int degree);
double error_L2(const Mesh& mesh, const Region* region, const ScalarField& exact, const DofMap& dofs,
                const Eigen::VectorXd& coeffs, int degree);

/// sum over interior faces F of weight(F) * int_F |[grad v . n]|^2 for a
/// discrete vector field v (field-local coefficients).
double gradient_jump_squared(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& coeffs, int degree,
                             const std::function<double(const Face&)>& weight);

/// (gamma_u sum_F h_F int_F |[grad(u_h - I_h u) . n]|^2)^{1/2}.
double residual_quantity(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& uh, const VectorField& exact,
                         double gamma_u);

/// Pairwise orders ln(e_i / e_{i+1}) / ln(h_i / h_{i+1}).
/// Throws std::invalid_argument on mismatched lengths, fewer than two
/// entries or nonpositive values.
std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs);

/// Squared contributions to the stability norm of a discrete solution.
struct TripleNormParts {
  double primal_stabilization = 0.0;  ///< S_h(U, U), pressure data included when active
  double measurement = 0.0;           ///< gamma_M / xi |u_h|^2 on omega_M
  double dual_stabilization = 0.0;    ///< S*(Z, Z)
  [[nodiscard]] double total() const { return primal_stabilization + measurement + dual_stabilization; }
};

struct MeshResult {
  int n_div = 0;
  double h = 0.0;
  int unknowns = 0;
  double err_uB = 0.0;
  double err_uOmega = 0.0;
  double err_p = 0.0;
  /// False when the exact pressure vanishes and err_p is absolute.
  bool err_p_relative = true;
  double residual_q = 0.0;
  TripleNormParts triple;
  SolveReport solve;
  double seconds = 0.0;
};

struct ConvergenceRecord {
  std::vector<MeshResult> rows;
  /// False when a mesh-level failure aborted the sweep.
  bool complete = true;
  std::string failure;

  [[nodiscard]] std::vector<double> hs() const;
  [[nodiscard]] std::vector<double> eoc_uB() const;
  [[nodiscard]] std::vector<double> eoc_uOmega() const;
  [[nodiscard]] std::vector<double> eoc_p() const;
  [[nodiscard]] std::vector<double> eoc_residual() const;
  /// Rate between the two finest meshes.
  [[nodiscard]] double finest_eoc_uB() const;
  [[nodiscard]] double finest_eoc_residual() const;
};

inline constexpr const char* kCsvHeader = "n_div,h,err_uB,err_uOmega,err_p,residual_q,eoc_uB,solver_res,seconds";

/// One row per mesh. eoc_uB is empty on the first row; seconds is written
/// only when `with_timing`, otherwise 0 so that reruns are byte-identical.
void write_csv(std::ostream& out, const ConvergenceRecord& record, bool with_timing);

}  // namespace ucflow

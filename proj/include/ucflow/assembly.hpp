#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>

#include "ucflow/cases.hpp"
#include "ucflow/dofmap.hpp"
#include "ucflow/lagrange.hpp"
#include "ucflow/mesh.hpp"
#include "ucflow/sparse.hpp"

namespace ucflow {

/// Weights of the stabilization, measurement and pressure-data terms.
struct StabilizationParams {
  double alpha = 0.1;
  double gamma_u = 0.1;
  double gamma_div = 0.1;
  double gamma_gls = 0.1;
  double gamma_u_star = 0.1;
  double gamma_p_star = 0.1;
  double gamma_M = 1000.0;
  double gamma_P = 1.0;
};

/// Base flow, viscosity and the derived weights xi = max(nu, |U|_inf h).
struct CoefficientField {
  std::function<Vec2(const Point&)> base_flow;
  std::function<Mat2(const Point&)> base_flow_gradient;
  double nu = 1.0;
  /// max |U(x)| over all volume quadrature points.
  double sup_norm = 0.0;

  [[nodiscard]] double xi(double h) const { return std::max(nu, sup_norm * h); }
};

CoefficientField make_coefficients(const ProblemCase& c, const Mesh& mesh, int degree);

struct BlockLayout {
  int velocity = 0, velocity_size = 0;
  int pressure = 0, pressure_size = 0;
  int dual_velocity = 0, dual_velocity_size = 0;
  int dual_pressure = 0, dual_pressure_size = 0;
  int multiplier = 0;
  int size = 0;

  static BlockLayout of(const FeSystem& fe);
};

/// Global symmetric saddle-point system:
///   [ S_h + m   A^T ] [U]   [ m(u_M, .) + GLS data ]
///   [ A        -S*  ] [Z] = [ l(.)                 ]
/// with one extra row/column enforcing the zero mean of p_h.
struct SaddleSystem {
  CsrMatrix matrix;
  Eigen::VectorXd rhs;
  BlockLayout blocks;
};

/// Assembles the individual forms of the primal-dual system on one mesh.
///
/// Every `assemble_*` method adds its contribution into the given matrix
/// (full-system pattern, see `zero_matrix`) and/or right-hand side; pass
/// nullptr to skip either. Region-restricted integrals include a volume
/// quadrature point iff the region contains it.
class Assembler {
 public:
  Assembler(const Mesh& mesh, const FeSystem& fe, const ProblemCase& problem, const StabilizationParams& params);
  ~Assembler();
  Assembler(const Assembler&) = delete;
  Assembler& operator=(const Assembler&) = delete;

  [[nodiscard]] const CoefficientField& coefficients() const { return coeffs_; }
  [[nodiscard]] const StabilizationParams& params() const { return params_; }
  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] const FeSystem& fe() const { return fe_; }
  [[nodiscard]] const ProblemCase& problem() const { return problem_; }
  /// Measurement weight scale xi computed with the global mesh size.
  [[nodiscard]] double xi_global() const { return coeffs_.xi(mesh_.h()); }
  [[nodiscard]] int volume_quadrature_degree() const { return volume_degree_; }

  [[nodiscard]] CsrMatrix zero_matrix() const { return CsrMatrix(pattern_); }
  [[nodiscard]] Eigen::VectorXd zero_vector() const { return Eigen::VectorXd::Zero(fe_.size()); }

  /// a(u, w) - b(p, w) + b(x, u) on (dual test, primal trial) and its
  /// transpose; right-hand side l(w) = (f, w).
  void assemble_coupling(CsrMatrix* matrix, Eigen::VectorXd* rhs) const;
  /// gamma_M / xi (u, v)_{omega_M}; data u_M = u + noise on omega_M, where
  /// `noise` is a primal-velocity coefficient vector (may be null).
  /// Returns the number of quadrature points that fell inside omega_M.
  int assemble_measurement(CsrMatrix* matrix, Eigen::VectorXd* rhs, const Eigen::VectorXd* noise) const;
  /// gamma_GLS sum_T h_T^2 / xi_T (L(u, p), L(v, q))_T and the matching data term with f.
  void assemble_gls(CsrMatrix* matrix, Eigen::VectorXd* rhs) const;
  /// alpha h^{2k} (grad u, grad v) + gamma_u sum_F h_F xi_F ([grad u n], [grad v n])_F
  /// + gamma_div sum_T xi_T (div u, div v)_T.
  void assemble_cip(CsrMatrix* matrix) const;
  /// The face part of assemble_cip alone.
  void assemble_gradient_jump(CsrMatrix* matrix) const;
  /// -(gamma_u* (grad z, grad w) + gamma_p* (y, x)), i.e. with the system sign.
  void assemble_dual_stabilizer(CsrMatrix* matrix) const;
  /// gamma_P (p_h, q) and gamma_P (p, q).
  void assemble_pressure_data(CsrMatrix* matrix, Eigen::VectorXd* rhs) const;
  /// Multiplier row/column (q, 1) enforcing zero mean of p_h.
  void assemble_mean_constraint(CsrMatrix* matrix) const;

  [[nodiscard]] SaddleSystem assemble_system(bool pressure_data, const Eigen::VectorXd* noise = nullptr) const;
  /// Right-hand side only; the matrix does not depend on the data.
  [[nodiscard]] Eigen::VectorXd assemble_rhs(bool pressure_data, const Eigen::VectorXd* noise = nullptr) const;

  struct Workspace;

 private:
  template <typename Kernel>
  void for_each_element(bool need_hessians, Kernel&& kernel) const;

  const Mesh& mesh_;
  const FeSystem& fe_;
  const ProblemCase& problem_;
  StabilizationParams params_;
  CoefficientField coeffs_;
  int volume_degree_;
  int face_degree_;
  std::shared_ptr<const SparsityPattern> pattern_;
  std::array<Tabulation, 4> tabs_;  // u, p, z, y
};

/// Convenience: full system for a case with the given variant.
SaddleSystem assemble_full(const Mesh& mesh, const FeSystem& fe, const ProblemCase& problem,
                           const StabilizationParams& params, bool pressure_data,
                           const Eigen::VectorXd* noise = nullptr);

}  // namespace ucflow

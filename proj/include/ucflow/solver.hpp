#pragma once

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>

#include "ucflow/assembly.hpp"
#include "ucflow/sparse.hpp"

namespace ucflow {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  int unknowns = 0;
  long nonzeros = 0;
  long factor_nonzeros = 0;
  /// ||G x - b|| / ||b||, recomputed from the assembled matrix.
  double relative_residual = 0.0;
  double rcond = 0.0;  ///< reciprocal condition estimate of the factorization
  double pivot_min = 0.0;
  double pivot_max = 0.0;
  int refinement_steps = 0;
  double factor_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Sparse LU factorization (UMFPACK, with pivoting) of a square CSR matrix.
/// Factor once, then solve for any number of right-hand sides.
class SparseLu {
 public:
  /// Throws SolverError if the matrix is singular to working precision.
  explicit SparseLu(const CsrMatrix& matrix);
  ~SparseLu();
  SparseLu(const SparseLu&) = delete;
  SparseLu& operator=(const SparseLu&) = delete;

  /// Solves and refines until the relative residual is <= `tolerance` or
  /// refinement stalls. The returned report always carries the residual.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs, SolveReport* report = nullptr, double tolerance = 1e-12) const;

  [[nodiscard]] const SolveReport& factor_report() const { return factor_report_; }

 private:
  const CsrMatrix& matrix_;
  void* symbolic_ = nullptr;
  void* numeric_ = nullptr;
  SolveReport factor_report_;
};

/// Partitioned solution of the saddle system.
struct Solution {
  Eigen::VectorXd velocity;
  Eigen::VectorXd pressure;
  Eigen::VectorXd dual_velocity;
  Eigen::VectorXd dual_pressure;
  double multiplier = 0.0;
  Eigen::VectorXd raw;
  SolveReport report;
};

Solution partition(const BlockLayout& blocks, Eigen::VectorXd x);

inline constexpr double kResidualContract = 1e-9;

/// Factor + solve. Throws SolverError on a singular matrix or when the
/// residual contract (1e-9) is not met.
Solution solve(const SaddleSystem& system);
Eigen::VectorXd solve(const CsrMatrix& matrix, const Eigen::VectorXd& rhs, SolveReport* report = nullptr);

}  // namespace ucflow

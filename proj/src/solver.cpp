#include "ucflow/solver.hpp"

#include <umfpack.h>

#include <chrono>
#include <cmath>
#include <sstream>
#include <vector>

namespace ucflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string umfpack_message(const char* stage, int status, double rcond) {
  std::ostringstream s;
  s << "sparse LU " << stage << " failed (UMFPACK status " << status << ")";
  if (status == UMFPACK_WARNING_singular_matrix) s << ": matrix is singular";
  s << "; reciprocal condition estimate " << rcond;
  return s.str();
}

}  // namespace

SparseLu::SparseLu(const CsrMatrix& matrix) : matrix_(matrix) {
  const auto t0 = Clock::now();
  const SparsityPattern& p = matrix.pattern();
  const int n = p.rows;
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_di_defaults(control);

  // CSR arrays of A are the CSC arrays of A^T; solves use UMFPACK_At.
  int status = umfpack_di_symbolic(n, n, p.row_ptr.data(), p.cols.data(), matrix.values().data(), &symbolic_, control,
                                   info);
  if (status != UMFPACK_OK) throw SolverError(umfpack_message("analysis", status, 0.0));
  status = umfpack_di_numeric(p.row_ptr.data(), p.cols.data(), matrix.values().data(), symbolic_, &numeric_, control,
                              info);
  factor_report_.unknowns = n;
  factor_report_.nonzeros = p.nnz();
  factor_report_.rcond = info[UMFPACK_RCOND];
  factor_report_.pivot_min = info[UMFPACK_UMIN];
  factor_report_.pivot_max = info[UMFPACK_UMAX];
  factor_report_.factor_nonzeros = static_cast<long>(info[UMFPACK_LNZ] + info[UMFPACK_UNZ]);
  factor_report_.factor_seconds = seconds_since(t0);
  if (status != UMFPACK_OK) {
    const double rcond = info[UMFPACK_RCOND];
    umfpack_di_free_symbolic(&symbolic_);
    if (numeric_) umfpack_di_free_numeric(&numeric_);
    throw SolverError(umfpack_message("factorization", status, rcond));
  }
}

SparseLu::~SparseLu() {
  if (numeric_) umfpack_di_free_numeric(&numeric_);
  if (symbolic_) umfpack_di_free_symbolic(&symbolic_);
}

Eigen::VectorXd SparseLu::solve(const Eigen::VectorXd& rhs, SolveReport* report, double tolerance) const {
  const auto t0 = Clock::now();
  const SparsityPattern& p = matrix_.pattern();
  if (rhs.size() != p.rows) throw std::invalid_argument("SparseLu::solve: size mismatch");
  double control[UMFPACK_CONTROL];
  double info[UMFPACK_INFO];
  umfpack_di_defaults(control);
  control[UMFPACK_IRSTEP] = 0;

  auto lu_solve = [&](const Eigen::VectorXd& b) {
    Eigen::VectorXd x(b.size());
    const int status = umfpack_di_solve(UMFPACK_At, p.row_ptr.data(), p.cols.data(), matrix_.values().data(),
                                        x.data(), b.data(), numeric_, control, info);
    if (status != UMFPACK_OK) throw SolverError(umfpack_message("solve", status, factor_report_.rcond));
    return x;
  };

  const double bnorm = rhs.norm();
  Eigen::VectorXd x = lu_solve(rhs);
  Eigen::VectorXd r = rhs - matrix_.multiply(x);
  double res = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
  int steps = 0;
  // Fixed-precision iterative refinement.
  while (res > tolerance && steps < 10) {
    const Eigen::VectorXd candidate = x + lu_solve(r);
    const Eigen::VectorXd rc = rhs - matrix_.multiply(candidate);
    const double rescand = bnorm > 0.0 ? rc.norm() / bnorm : rc.norm();
    ++steps;
    if (!(rescand < res)) break;
    x = candidate;
    r = rc;
    res = rescand;
  }

  if (report) {
    *report = factor_report_;
    report->relative_residual = res;
    report->refinement_steps = steps;
    report->solve_seconds = seconds_since(t0);
  }
  return x;
}

Solution partition(const BlockLayout& b, Eigen::VectorXd x) {
  Solution s;
  s.velocity = x.segment(b.velocity, b.velocity_size);
  s.pressure = x.segment(b.pressure, b.pressure_size);
  s.dual_velocity = x.segment(b.dual_velocity, b.dual_velocity_size);
  s.dual_pressure = x.segment(b.dual_pressure, b.dual_pressure_size);
  s.multiplier = x[b.multiplier];
  s.raw = std::move(x);
  return s;
}

Eigen::VectorXd solve(const CsrMatrix& matrix, const Eigen::VectorXd& rhs, SolveReport* report) {
  const SparseLu lu(matrix);
  SolveReport local;
  Eigen::VectorXd x = lu.solve(rhs, &local);
  if (report) *report = local;
  if (!(local.relative_residual <= kResidualContract)) {
    std::ostringstream s;
    s << "solver residual " << local.relative_residual << " exceeds " << kResidualContract
      << " (reciprocal condition estimate " << local.rcond << ")";
    throw SolverError(s.str());
  }
  return x;
}

Solution solve(const SaddleSystem& system) {
  SolveReport report;
  Eigen::VectorXd x = solve(system.matrix, system.rhs, &report);
  Solution s = partition(system.blocks, std::move(x));
  s.report = report;
  return s;
}

}  // namespace ucflow

#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace ucflow {

/// Fixed sparsity pattern in compressed-row form. Column indices are sorted
/// within each row.
struct SparsityPattern {
  int rows = 0;
  std::vector<int> row_ptr;
  std::vector<int> cols;

  [[nodiscard]] int nnz() const { return static_cast<int>(cols.size()); }
  /// Position of (i, j) in `cols`, or -1 when not in the pattern.
  [[nodiscard]] int find(int i, int j) const;
};

/// Collects row-wise column sets and compresses them. Negative indices are
/// ignored so eliminated DOFs can be passed through unchanged.
class PatternBuilder {
 public:
  explicit PatternBuilder(int rows);

  void couple(std::span<const int> rows, std::span<const int> cols);
  void add(int row, int col);
  [[nodiscard]] std::shared_ptr<const SparsityPattern> build();

 private:
  std::vector<std::vector<int>> rows_;
};

/// Square CSR matrix over a shared pattern.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  explicit CsrMatrix(std::shared_ptr<const SparsityPattern> pattern);

  [[nodiscard]] int rows() const { return pattern_ ? pattern_->rows : 0; }
  [[nodiscard]] int nnz() const { return pattern_ ? pattern_->nnz() : 0; }
  [[nodiscard]] const SparsityPattern& pattern() const { return *pattern_; }
  [[nodiscard]] const std::shared_ptr<const SparsityPattern>& shared_pattern() const { return pattern_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }
  [[nodiscard]] std::vector<double>& values() { return values_; }

  /// Adds v at (i, j); throws std::out_of_range when (i, j) is outside the pattern.
  void add(int i, int j, double v);
  [[nodiscard]] double coeff(int i, int j) const;

  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  [[nodiscard]] double quadratic_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
  [[nodiscard]] double max_abs() const;
  /// max_ij |a_ij - a_ji|
  [[nodiscard]] double max_asymmetry() const;

  CsrMatrix& operator+=(const CsrMatrix& other);

 private:
  std::shared_ptr<const SparsityPattern> pattern_;
  std::vector<double> values_;
};

/// Coordinate text dump, one `i j value` per stored entry.
void write_coordinate(std::ostream& out, const CsrMatrix& m);

}  // namespace ucflow

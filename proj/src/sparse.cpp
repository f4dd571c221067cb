#include "ucflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ucflow {

int SparsityPattern::find(int i, int j) const {
  const auto first = cols.begin() + row_ptr[i];
  const auto last = cols.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - cols.begin()) : -1;
}

PatternBuilder::PatternBuilder(int rows) : rows_(rows) {}

void PatternBuilder::couple(std::span<const int> rows, std::span<const int> cols) {
  for (int r : rows) {
    if (r < 0) continue;
    auto& row = rows_[r];
    for (int c : cols) {
      if (c >= 0) row.push_back(c);
    }
  }
}

void PatternBuilder::add(int row, int col) {
  if (row >= 0 && col >= 0) rows_[row].push_back(col);
}

std::shared_ptr<const SparsityPattern> PatternBuilder::build() {
  auto p = std::make_shared<SparsityPattern>();
  p->rows = static_cast<int>(rows_.size());
  p->row_ptr.assign(rows_.size() + 1, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto& row = rows_[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    p->row_ptr[i + 1] = p->row_ptr[i] + static_cast<int>(row.size());
  }
  p->cols.reserve(p->row_ptr.back());
  for (auto& row : rows_) {
    p->cols.insert(p->cols.end(), row.begin(), row.end());
    std::vector<int>().swap(row);
  }
  return p;
}

CsrMatrix::CsrMatrix(std::shared_ptr<const SparsityPattern> pattern)
    : pattern_(std::move(pattern)), values_(pattern_->cols.size(), 0.0) {}

void CsrMatrix::add(int i, int j, double v) {
  const int pos = pattern_->find(i, j);
  if (pos < 0) {
    throw std::out_of_range("CsrMatrix::add: entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside the sparsity pattern");
  }
  values_[pos] += v;
}

double CsrMatrix::coeff(int i, int j) const {
  const int pos = pattern_->find(i, j);
  return pos < 0 ? 0.0 : values_[pos];
}

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
  const auto& p = *pattern_;
  Eigen::VectorXd y(p.rows);
  for (int i = 0; i < p.rows; ++i) {
    double s = 0.0;
    for (int q = p.row_ptr[i]; q < p.row_ptr[i + 1]; ++q) s += values_[q] * x[p.cols[q]];
    y[i] = s;
  }
  return y;
}

double CsrMatrix::quadratic_form(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  return x.dot(multiply(y));
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double CsrMatrix::max_asymmetry() const {
  const auto& p = *pattern_;
  double m = 0.0;
  for (int i = 0; i < p.rows; ++i) {
    for (int q = p.row_ptr[i]; q < p.row_ptr[i + 1]; ++q) {
      m = std::max(m, std::abs(values_[q] - coeff(p.cols[q], i)));
    }
  }
  return m;
}

CsrMatrix& CsrMatrix::operator+=(const CsrMatrix& other) {
  if (other.pattern_ != pattern_) throw std::invalid_argument("CsrMatrix: patterns differ");
  for (std::size_t q = 0; q < values_.size(); ++q) values_[q] += other.values_[q];
  return *this;
}

void write_coordinate(std::ostream& out, const CsrMatrix& m) {
  const auto& p = m.pattern();
  const auto old = out.precision(17);
  for (int i = 0; i < p.rows; ++i) {
    for (int q = p.row_ptr[i]; q < p.row_ptr[i + 1]; ++q) out << i << ' ' << p.cols[q] << ' ' << m.values()[q] << '\n';
  }
  out.precision(old);
}

}  // namespace ucflow

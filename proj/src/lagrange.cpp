#include "ucflow/lagrange.hpp"

#include <Eigen/Dense>

#include <cmath>


#include <stdexcept>
#include <string>

namespace ucflow {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

}  // namespace

ReferenceElement::ReferenceElement(int order) : order_(order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("ReferenceElement: order must be in [1, 4], got " + std::to_string(order));
  }
  const int k = order;
  const double dk = k;
  const std::array<Point, 3> corners = {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};

  for (int v = 0; v < 3; ++v) {
    nodes_.push_back(corners[v]);
    locations_.push_back({NodeLocation::Kind::Vertex, v, 0});
  }
  for (int edge = 0; edge < 3; ++edge) {
    const Point& a = corners[(edge + 1) % 3];
    const Point& b = corners[(edge + 2) % 3];
    for (int m = 1; m < k; ++m) {
      const double t = m / dk;
      nodes_.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
      locations_.push_back({NodeLocation::Kind::Edge, edge, m});
    }
  }
  int interior = 0;
  for (int j = 1; j < k; ++j) {
    for (int i = 1; i + j < k; ++i) {
      nodes_.push_back({i / dk, j / dk});
      locations_.push_back({NodeLocation::Kind::Interior, interior++, 0});
    }
  }

  for (int d = 0; d <= k; ++d) {
    for (int a = d; a >= 0; --a) exponents_.push_back({a, d - a});
  }
  const int n = num_nodes();
  Eigen::MatrixXd vandermonde(n, n);
  for (int i = 0; i < n; ++i) {
    for (int m = 0; m < n; ++m) {
      vandermonde(i, m) = ipow(nodes_[i][0], exponents_[m][0]) * ipow(nodes_[i][1], exponents_[m][1]);
    }
  }
  // Columns of the inverse are the monomial coefficients of each basis function.
  const Eigen::MatrixXd inv = vandermonde.fullPivLu().inverse();
  coeffs_.resize(static_cast<std::size_t>(n * n));
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) coeffs_[m * n + i] = inv(m, i);
  }
}

void ReferenceElement::values(const Point& x, double* out) const {
  const int n = num_nodes();
  for (int i = 0; i < n; ++i) out[i] = 0.0;
  for (int m = 0; m < n; ++m) {
    const auto [a, b] = exponents_[m];
    const double mono = ipow(x[0], a) * ipow(x[1], b);
    const double* c = &coeffs_[m * n];
    for (int i = 0; i < n; ++i) out[i] += c[i] * mono;
  }
}

void ReferenceElement::gradients(const Point& x, Gradient* out) const {
  const int n = num_nodes();
  for (int i = 0; i < n; ++i) out[i] = {0.0, 0.0};
  for (int m = 0; m < n; ++m) {
    const auto [a, b] = exponents_[m];
    const double dx = a > 0 ? a * ipow(x[0], a - 1) * ipow(x[1], b) : 0.0;
    const double dy = b > 0 ? b * ipow(x[0], a) * ipow(x[1], b - 1) : 0.0;
    const double* c = &coeffs_[m * n];
    for (int i = 0; i < n; ++i) {
      out[i][0] += c[i] * dx;
      out[i][1] += c[i] * dy;
    }
  }
}

void ReferenceElement::hessians(const Point& x, Hessian* out) const {
  const int n = num_nodes();
  for (int i = 0; i < n; ++i) out[i] = {0.0, 0.0, 0.0};
  for (int m = 0; m < n; ++m) {
    const auto [a, b] = exponents_[m];
    const double dxx = a > 1 ? a * (a - 1) * ipow(x[0], a - 2) * ipow(x[1], b) : 0.0;
    const double dxy = (a > 0 && b > 0) ? a * b * ipow(x[0], a - 1) * ipow(x[1], b - 1) : 0.0;
    const double dyy = b > 1 ? b * (b - 1) * ipow(x[0], a) * ipow(x[1], b - 2) : 0.0;
    const double* c = &coeffs_[m * n];
    for (int i = 0; i < n; ++i) {
      out[i][0] += c[i] * dxx;
      out[i][1] += c[i] * dxy;
      out[i][2] += c[i] * dyy;
    }
  }
}

const ReferenceElement& reference_element(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("reference_element: order must be in [1, 4], got " + std::to_string(order));
  }
  static const std::array<ReferenceElement, kMaxOrder> elements = {ReferenceElement(1), ReferenceElement(2),
                                                                   ReferenceElement(3), ReferenceElement(4)};
  return elements[order - 1];
}

std::vector<double> eval_basis(const ReferenceElement& element, const Point& x, int derivative_order) {
  const int n = element.num_nodes();
  switch (derivative_order) {
    case 0: {
      std::vector<double> out(n);
      element.values(x, out.data());
      return out;
    }
    case 1: {
      std::vector<Gradient> g(n);
      element.gradients(x, g.data());
      std::vector<double> out;
      out.reserve(2 * n);
      for (const auto& gi : g) out.insert(out.end(), gi.begin(), gi.end());
      return out;
    }
    case 2: {
      std::vector<Hessian> h(n);
      element.hessians(x, h.data());
      std::vector<double> out;
      out.reserve(3 * n);
      for (const auto& hi : h) out.insert(out.end(), hi.begin(), hi.end());
      return out;
    }
    default:
      throw std::invalid_argument("eval_basis: derivative order must be 0, 1 or 2");
  }
}

Tabulation tabulate(const ReferenceElement& element, const std::vector<Point>& points) {
  Tabulation t;
  t.num_points = static_cast<int>(points.size());
  t.num_basis = element.num_nodes();
  const auto n = static_cast<std::size_t>(t.num_basis);
  t.values.resize(points.size() * n);
  t.gradients.resize(points.size() * n);
  t.hessians.resize(points.size() * n);
  for (std::size_t q = 0; q < points.size(); ++q) {
    element.values(points[q], &t.values[q * n]);
    element.gradients(points[q], &t.gradients[q * n]);
    element.hessians(points[q], &t.hessians[q * n]);
  }
  return t;
}

}  // namespace ucflow

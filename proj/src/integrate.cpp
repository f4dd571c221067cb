#include "ucflow/integrate.hpp"

#include <cmath>
#include <vector>

namespace ucflow {

std::array<double, 2> evaluate_vector(const DofMap& dofs, const Eigen::VectorXd& coeffs, int e, const Point& xi) {
  const ReferenceElement& ref = reference_element(dofs.order());
  thread_local std::vector<double> phi;
  phi.resize(ref.num_nodes());
  ref.values(xi, phi.data());
  const int* nodes = dofs.nodes().element_nodes(e);
  std::array<double, 2> v{0.0, 0.0};
  for (int i = 0; i < ref.num_nodes(); ++i) {
    const int l = dofs.local_dof(nodes[i], 0);
    if (l < 0) continue;
    v[0] += phi[i] * coeffs[l];
    v[1] += phi[i] * coeffs[l + 1];
  }
  return v;
}

double evaluate_scalar(const DofMap& dofs, const Eigen::VectorXd& coeffs, int e, const Point& xi) {
  const ReferenceElement& ref = reference_element(dofs.order());
  thread_local std::vector<double> phi;
  phi.resize(ref.num_nodes());
  ref.values(xi, phi.data());
  const int* nodes = dofs.nodes().element_nodes(e);
  double v = 0.0;
  for (int i = 0; i < ref.num_nodes(); ++i) {
    const int l = dofs.local_dof(nodes[i], 0);
    if (l >= 0) v += phi[i] * coeffs[l];
  }
  return v;
}

namespace {

std::array<double, 2> sample(const VectorSource& s, int e, const Point& xi, const Point& x) {
  if (s.field) return (*s.field)(x);
  if (s.dofs) return evaluate_vector(*s.dofs, *s.coeffs, e, xi);
  return {0.0, 0.0};
}

double sample(const ScalarSource& s, int e, const Point& xi, const Point& x) {
  if (s.field) return (*s.field)(x);
  if (s.dofs) return evaluate_scalar(*s.dofs, *s.coeffs, e, xi);
  return 0.0;
}

template <typename Source, typename Diff>
double accumulate(const Mesh& mesh, const Source& a, const Source& b, const Region* region, int degree, Diff diff) {
  const QuadratureRule& rule = triangle_rule(degree);
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh.element_points(e));
    const double scale = std::abs(map.det);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.to_physical(rule.points[q]);
      if (region && !region->contains(x)) continue;
      sum += rule.weights[q] * scale * diff(sample(a, e, rule.points[q], x), sample(b, e, rule.points[q], x));
    }
  }
  return sum;
}

}  // namespace

double l2_distance_squared(const Mesh& mesh, const VectorSource& a, const VectorSource& b, const Region* region,
                           int degree) {
  return accumulate(mesh, a, b, region, degree, [](const std::array<double, 2>& u, const std::array<double, 2>& v) {
    const double d0 = u[0] - v[0], d1 = u[1] - v[1];
    return d0 * d0 + d1 * d1;
  });
}

double l2_distance_squared(const Mesh& mesh, const ScalarSource& a, const ScalarSource& b, const Region* region,
                           int degree) {
  return accumulate(mesh, a, b, region, degree, [](double u, double v) { return (u - v) * (u - v); });
}

double region_measure(const Mesh& mesh, const Region& region, int degree) {
  const ScalarField one = [](const Point&) { return 1.0; };
  return l2_distance_squared(mesh, ScalarSource{nullptr, nullptr, &one}, ScalarSource{}, &region, degree);
}

}  // namespace ucflow

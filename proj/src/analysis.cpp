#include "ucflow/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ucflow/integrate.hpp"
#include "ucflow/quadrature.hpp"

namespace ucflow {

namespace {

template <typename Field, typename Source>
double relative(const Mesh& mesh, const Region* region, const Field& exact, const DofMap& dofs,
                const Eigen::VectorXd& coeffs, int degree) {
  const Source ex{nullptr, nullptr, &exact};
  const double num = l2_distance_squared(mesh, ex, Source{&dofs, &coeffs, nullptr}, region, degree);
  const double den = l2_distance_squared(mesh, ex, Source{}, region, degree);
  if (!(den > 0.0)) throw std::domain_error("error_L2: exact field has zero norm on the region");
  return std::sqrt(num / den);
}

double safe_rate(double e0, double e1, double h0, double h1) {
  if (!(e0 > 0.0 && e1 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e0 / e1) / std::log(h0 / h1);
}

template <typename Get>
std::vector<double> rates(const std::vector<MeshResult>& rows, Get get) {
  std::vector<double> r;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    r.push_back(safe_rate(get(rows[i]), get(rows[i + 1]), rows[i].h, rows[i + 1].h));
  }
  return r;
}

double last_or_nan(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : v.back();
}

}  // namespace

double error_L2(const Mesh& mesh, const Region* region, const VectorField& exact, const DofMap& dofs,
                const Eigen::VectorXd& coeffs, int degree) {
  return relative<VectorField, VectorSource>(mesh, region, exact, dofs, coeffs, degree);
}

double error_L2(const Mesh& mesh, const Region* region, const ScalarField& exact, const DofMap& dofs,
                const Eigen::VectorXd& coeffs, int degree) {
  return relative<ScalarField, ScalarSource>(mesh, region, exact, dofs, coeffs, degree);
}

double gradient_jump_squared(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& coeffs, int degree,
                             const std::function<double(const Face&)>& weight) {
  const ReferenceElement& ref = reference_element(dofs.order());
  const int n = ref.num_nodes();
  const LineRule line = edge_rule(degree);
  std::vector<Gradient> gm(n), gp(n);
  double sum = 0.0;
  for (const Face& face : mesh.faces()) {
    if (!face.interior()) continue;
    const ElementMap mm(mesh.element_points(face.minus));
    const ElementMap mp(mesh.element_points(face.plus));
    const int* nm = dofs.nodes().element_nodes(face.minus);
    const int* np = dofs.nodes().element_nodes(face.plus);
    const Point& a = mesh.vertices()[face.vertices[0]];
    const Point& b = mesh.vertices()[face.vertices[1]];
    double face_sum = 0.0;
    for (int q = 0; q < line.size(); ++q) {
      const double t = line.points[q];
      const Point x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      ref.gradients(mm.to_reference(x), gm.data());
      ref.gradients(mp.to_reference(x), gp.data());
      std::array<double, 2> jump{0.0, 0.0};
      for (int i = 0; i < n; ++i) {
        const Gradient gi = mm.gradient(gm[i]);
        const Gradient gj = mp.gradient(gp[i]);
        const double dm = gi[0] * face.normal[0] + gi[1] * face.normal[1];
        const double dp = gj[0] * face.normal[0] + gj[1] * face.normal[1];
        for (int c = 0; c < 2; ++c) {
          const int lm = dofs.local_dof(nm[i], c);
          const int lp = dofs.local_dof(np[i], c);
          if (lm >= 0) jump[c] += dm * coeffs[lm];
          if (lp >= 0) jump[c] -= dp * coeffs[lp];
        }
      }
      face_sum += line.weights[q] * (jump[0] * jump[0] + jump[1] * jump[1]);
    }
    sum += weight(face) * face.length * face_sum;
  }
  return sum;
}

double residual_quantity(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& uh, const VectorField& exact,
                         double gamma_u) {
  const Eigen::VectorXd diff = uh - interpolate(dofs, exact);
  const double s = gradient_jump_squared(mesh, dofs, diff, face_degree(dofs.order()),
                                         [gamma_u](const Face& f) { return gamma_u * f.length; });
  return std::sqrt(s);
}

std::vector<double> eoc(std::span<const double> errors, std::span<const double> hs) {
  if (errors.size() != hs.size()) throw std::invalid_argument("eoc: errors and mesh sizes differ in length");
  if (errors.size() < 2) throw std::invalid_argument("eoc: need at least two meshes");
  std::vector<double> out;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(hs[i] > 0.0)) throw std::invalid_argument("eoc: entries must be positive");
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(hs[i] / hs[i + 1]));
  }
  return out;
}

std::vector<double> ConvergenceRecord::hs() const {
  std::vector<double> h;
  for (const auto& r : rows) h.push_back(r.h);
  return h;
}

std::vector<double> ConvergenceRecord::eoc_uB() const {
  return rates(rows, [](const MeshResult& r) { return r.err_uB; });
}
std::vector<double> ConvergenceRecord::eoc_uOmega() const {
  return rates(rows, [](const MeshResult& r) { return r.err_uOmega; });
}
std::vector<double> ConvergenceRecord::eoc_p() const {
  return rates(rows, [](const MeshResult& r) { return r.err_p; });
}
std::vector<double> ConvergenceRecord::eoc_residual() const {
  return rates(rows, [](const MeshResult& r) { return r.residual_q; });
}
double ConvergenceRecord::finest_eoc_uB() const { return last_or_nan(eoc_uB()); }
double ConvergenceRecord::finest_eoc_residual() const { return last_or_nan(eoc_residual()); }

void write_csv(std::ostream& out, const ConvergenceRecord& record, bool with_timing) {
  out << kCsvHeader << '\n';
  const auto orders = record.eoc_uB();
  char buf[512];
  for (std::size_t i = 0; i < record.rows.size(); ++i) {
    const MeshResult& r = record.rows[i];
    char eoc_text[64] = "";
    if (i > 0) std::snprintf(eoc_text, sizeof eoc_text, "%.6f", orders[i - 1]);
    std::snprintf(buf, sizeof buf, "%d,%.10e,%.10e,%.10e,%.10e,%.10e,%s,%.3e,%.3f\n", r.n_div, r.h, r.err_uB,
                  r.err_uOmega, r.err_p, r.residual_q, eoc_text, r.solve.relative_residual,
                  with_timing ? r.seconds : 0.0);
    out << buf;
  }
}

}  // namespace ucflow

#include "ucflow/assembly.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <vector>

#include "ucflow/integrate.hpp"
#include "ucflow/quadrature.hpp"

namespace ucflow {

CoefficientField make_coefficients(const ProblemCase& c, const Mesh& mesh, int degree) {
  CoefficientField coeffs;
  coeffs.base_flow = c.base_flow;
  coeffs.base_flow_gradient = c.base_flow_gradient;
  coeffs.nu = c.nu;
  if (c.zero_base_flow) return coeffs;
  const QuadratureRule& rule = triangle_rule(degree);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh.element_points(e));
    for (const auto& xi : rule.points) {
      const Vec2 u = c.base_flow(map.to_physical(xi));
      coeffs.sup_norm = std::max(coeffs.sup_norm, std::hypot(u[0], u[1]));
    }
  }
  return coeffs;
}

BlockLayout BlockLayout::of(const FeSystem& fe) {
  BlockLayout b;
  b.velocity = fe.velocity().offset();
  b.velocity_size = fe.velocity().size();
  b.pressure = fe.pressure().offset();
  b.pressure_size = fe.pressure().size();
  b.dual_velocity = fe.dual_velocity().offset();
  b.dual_velocity_size = fe.dual_velocity().size();
  b.dual_pressure = fe.dual_pressure().offset();
  b.dual_pressure_size = fe.dual_pressure().size();
  b.multiplier = fe.multiplier();
  b.size = fe.size();
  return b;
}

namespace {

// Basis data of one field on one element at the volume quadrature points.
struct FieldBasis {
  int n = 0;
  int comps = 1;
  std::vector<int> dofs;  // [i * comps + c], -1 when eliminated
  const double* val = nullptr;
  std::vector<Gradient> grad;
  std::vector<Hessian> hess;

  void fill(const DofMap& dm, const Tabulation& tab, const ElementMap& map, int e, bool hessians) {
    n = tab.num_basis;
    comps = dm.components();
    dofs.resize(static_cast<std::size_t>(n * comps));
    const int* nodes = dm.nodes().element_nodes(e);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < comps; ++c) dofs[i * comps + c] = dm.dof(nodes[i], c);
    }
    val = tab.values.data();
    grad.resize(tab.gradients.size());
    for (std::size_t q = 0; q < grad.size(); ++q) grad[q] = map.gradient(tab.gradients[q]);
    if (hessians) {
      hess.resize(tab.hessians.size());
      for (std::size_t q = 0; q < hess.size(); ++q) hess[q] = map.hessian(tab.hessians[q]);
    }
  }
};

std::vector<int> element_dofs(const DofMap& dm, int e) {
  const int n = dm.nodes().nodes_per_element();
  const int* nodes = dm.nodes().element_nodes(e);
  std::vector<int> d(static_cast<std::size_t>(n * dm.components()));
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < dm.components(); ++c) d[i * dm.components() + c] = dm.dof(nodes[i], c);
  }
  return d;
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a);
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

void scatter_block(CsrMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols,
                   const Eigen::MatrixXd& local) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0) continue;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double v = local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      // Structural zeros (e.g. the dual-pressure/pressure block) are not in the pattern.
      if (cols[j] < 0 || v == 0.0) continue;
      m.add(rows[i], cols[j], v);
    }
  }
}

void scatter_vector(Eigen::VectorXd& v, const std::vector<int>& rows, const Eigen::VectorXd& local) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= 0) v[rows[i]] += local[static_cast<Eigen::Index>(i)];
  }
}

}  // namespace

struct Assembler::Workspace {
  int element = 0;
  ElementMap map;
  double h = 0.0;
  double xi = 0.0;
  std::vector<Point> x;
  std::vector<double> w;
  FieldBasis u, p, z, y;
};

Assembler::Assembler(const Mesh& mesh, const FeSystem& fe, const ProblemCase& problem,
                     const StabilizationParams& params)
    : mesh_(mesh),
      fe_(fe),
      problem_(problem),
      params_(params),
      volume_degree_(volume_degree(fe.orders().k)),
      face_degree_(face_degree(fe.orders().k)) {
  coeffs_ = make_coefficients(problem, mesh, volume_degree_);
  double h_min = mesh.h();
  for (int e = 0; e < mesh.num_elements(); ++e) h_min = std::min(h_min, mesh.element_diameter(e));
  if (!(coeffs_.xi(h_min) > 0.0)) {
    throw std::invalid_argument("Assembler: xi vanishes (zero viscosity and zero base flow)");
  }

  const QuadratureRule& rule = triangle_rule(volume_degree_);
  const std::array<int, 4> orders = {fe.orders().k, fe.orders().k2, fe.orders().k1, fe.orders().k3};
  for (int f = 0; f < 4; ++f) tabs_[f] = tabulate(reference_element(orders[f]), rule.points);

  PatternBuilder builder(fe.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto u = element_dofs(fe.velocity(), e);
    const auto p = element_dofs(fe.pressure(), e);
    const auto z = element_dofs(fe.dual_velocity(), e);
    const auto y = element_dofs(fe.dual_pressure(), e);
    const auto primal = concat(u, p);
    builder.couple(primal, primal);
    builder.couple(u, z);
    builder.couple(z, u);
    builder.couple(p, z);
    builder.couple(z, p);
    builder.couple(u, y);
    builder.couple(y, u);
    builder.couple(z, z);
    builder.couple(y, y);
  }
  for (const auto& face : mesh.faces()) {
    if (!face.interior()) continue;
    const auto both = concat(element_dofs(fe.velocity(), face.minus), element_dofs(fe.velocity(), face.plus));
    builder.couple(both, both);
  }
  for (int d = 0; d < fe.pressure().size(); ++d) {
    builder.add(fe.multiplier(), fe.pressure().offset() + d);
    builder.add(fe.pressure().offset() + d, fe.multiplier());
  }
  pattern_ = builder.build();
}

Assembler::~Assembler() = default;

template <typename Kernel>
void Assembler::for_each_element(bool need_hessians, Kernel&& kernel) const {
  const QuadratureRule& rule = triangle_rule(volume_degree_);
  Workspace ws;
  ws.x.resize(rule.size());
  ws.w.resize(rule.size());
  for (int e = 0; e < mesh_.num_elements(); ++e) {
    ws.element = e;
    ws.map = ElementMap(mesh_.element_points(e));
    ws.h = mesh_.element_diameter(e);
    ws.xi = coeffs_.xi(ws.h);
    const double scale = std::abs(ws.map.det);
    for (int q = 0; q < rule.size(); ++q) {
      ws.x[q] = ws.map.to_physical(rule.points[q]);
      ws.w[q] = rule.weights[q] * scale;
    }
    ws.u.fill(fe_.velocity(), tabs_[0], ws.map, e, need_hessians);
    ws.p.fill(fe_.pressure(), tabs_[1], ws.map, e, false);
    ws.z.fill(fe_.dual_velocity(), tabs_[2], ws.map, e, false);
    ws.y.fill(fe_.dual_pressure(), tabs_[3], ws.map, e, false);
    kernel(static_cast<const Workspace&>(ws));
  }
}

void Assembler::assemble_coupling(CsrMatrix* matrix, Eigen::VectorXd* rhs) const {
  const double nu = coeffs_.nu;
  const bool convective = !problem_.zero_base_flow;
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis &u = ws.u, &p = ws.p, &z = ws.z, &y = ws.y;
    const int nu2 = 2 * u.n, nz2 = 2 * z.n;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nz2 + y.n, nu2 + p.n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nz2);
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      const double w = ws.w[q];
      Vec2 U{0.0, 0.0};
      Mat2 G{0.0, 0.0, 0.0, 0.0};
      if (convective) {
        U = coeffs_.base_flow(ws.x[q]);
        G = coeffs_.base_flow_gradient(ws.x[q]);
      }
      const Vec2 f = rhs ? problem_.source(ws.x[q]) : Vec2{0.0, 0.0};
      for (int i = 0; i < z.n; ++i) {
        const double chi = z.val[q * z.n + i];
        const Gradient& gchi = z.grad[q * z.n + i];
        for (int d = 0; d < 2; ++d) {
          const int row = 2 * i + d;
          b[row] += w * f[d] * chi;
          for (int j = 0; j < u.n; ++j) {
            const double phi = u.val[q * u.n + j];
            const Gradient& gphi = u.grad[q * u.n + j];
            const double advect = U[0] * gphi[0] + U[1] * gphi[1];
            const double diffuse = nu * (gphi[0] * gchi[0] + gphi[1] * gchi[1]);
            for (int c = 0; c < 2; ++c) {
              double v = phi * G[2 * d + c] * chi;
              if (c == d) v += advect * chi + diffuse;
              B(row, 2 * j + c) += w * v;
            }
          }
          for (int j = 0; j < p.n; ++j) B(row, nu2 + j) -= w * p.val[q * p.n + j] * gchi[d];
        }
      }
      for (int i = 0; i < y.n; ++i) {
        const double eta = y.val[q * y.n + i];
        for (int j = 0; j < u.n; ++j) {
          const Gradient& gphi = u.grad[q * u.n + j];
          B(nz2 + i, 2 * j) += w * eta * gphi[0];
          B(nz2 + i, 2 * j + 1) += w * eta * gphi[1];
        }
      }
    }
    if (matrix) {
      const auto dual = concat(z.dofs, y.dofs);
      const auto primal = concat(u.dofs, p.dofs);
      scatter_block(*matrix, dual, primal, B);
      scatter_block(*matrix, primal, dual, B.transpose());
    }
    if (rhs) scatter_vector(*rhs, z.dofs, b);
  });
}

int Assembler::assemble_measurement(CsrMatrix* matrix, Eigen::VectorXd* rhs, const Eigen::VectorXd* noise) const {
  const double factor = params_.gamma_M / xi_global();
  const int offset = fe_.velocity().offset();
  int inside = 0;
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis& u = ws.u;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * u.n, 2 * u.n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(2 * u.n);
    bool touched = false;
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      if (!problem_.measurement.contains(ws.x[q])) continue;
      ++inside;
      touched = true;
      const double w = ws.w[q] * factor;
      const double* phi = &u.val[q * u.n];
      for (int i = 0; i < u.n; ++i) {
        for (int j = 0; j < u.n; ++j) {
          const double m = w * phi[i] * phi[j];
          K(2 * i, 2 * j) += m;
          K(2 * i + 1, 2 * j + 1) += m;
        }
      }
      if (rhs) {
        Vec2 data = problem_.velocity(ws.x[q]);
        if (noise) {
          for (int j = 0; j < u.n; ++j) {
            data[0] += phi[j] * (*noise)[u.dofs[2 * j] - offset];
            data[1] += phi[j] * (*noise)[u.dofs[2 * j + 1] - offset];
          }
        }
        for (int i = 0; i < u.n; ++i) {
          r[2 * i] += w * data[0] * phi[i];
          r[2 * i + 1] += w * data[1] * phi[i];
        }
      }
    }
    if (!touched) return;
    if (matrix) scatter_block(*matrix, u.dofs, u.dofs, K);
    if (rhs) scatter_vector(*rhs, u.dofs, r);
  });
  if (inside == 0) std::cerr << "warning: no quadrature point inside the measurement region\n";
  return inside;
}

void Assembler::assemble_gls(CsrMatrix* matrix, Eigen::VectorXd* rhs) const {
  const double nu = coeffs_.nu;
  const bool convective = !problem_.zero_base_flow;
  for_each_element(true, [&](const Workspace& ws) {
    const FieldBasis &u = ws.u, &p = ws.p;
    const int nu2 = 2 * u.n;
    const int np = nu2 + p.n;
    const double coeff = params_.gamma_gls * ws.h * ws.h / ws.xi;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(np, np);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(np);
    Eigen::MatrixXd L(2, np);
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      Vec2 U{0.0, 0.0};
      Mat2 G{0.0, 0.0, 0.0, 0.0};
      if (convective) {
        U = coeffs_.base_flow(ws.x[q]);
        G = coeffs_.base_flow_gradient(ws.x[q]);
      }
      L.setZero();
      for (int j = 0; j < u.n; ++j) {
        const double phi = u.val[q * u.n + j];
        const Gradient& g = u.grad[q * u.n + j];
        const Hessian& hs = u.hess[q * u.n + j];
        const double diag = U[0] * g[0] + U[1] * g[1] - nu * (hs[0] + hs[2]);
        for (int c = 0; c < 2; ++c) {
          for (int d = 0; d < 2; ++d) L(d, 2 * j + c) = phi * G[2 * d + c] + (c == d ? diag : 0.0);
        }
      }
      for (int j = 0; j < p.n; ++j) {
        const Gradient& g = p.grad[q * p.n + j];
        L(0, nu2 + j) = g[0];
        L(1, nu2 + j) = g[1];
      }
      const double w = ws.w[q] * coeff;
      K.noalias() += w * L.transpose() * L;
      if (rhs) {
        const Vec2 f = problem_.source(ws.x[q]);
        r.noalias() += w * L.transpose() * Eigen::Vector2d(f[0], f[1]);
      }
    }
    const auto primal = concat(u.dofs, p.dofs);
    if (matrix) scatter_block(*matrix, primal, primal, K);
    if (rhs) scatter_vector(*rhs, primal, r);
  });
}

void Assembler::assemble_cip(CsrMatrix* matrix) const {
  if (!matrix) return;
  const int k = fe_.orders().k;
  const double grad_weight = params_.alpha * std::pow(mesh_.h(), 2 * k);
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis& u = ws.u;
    const double div_weight = params_.gamma_div * ws.xi;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * u.n, 2 * u.n);
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      const double w = ws.w[q];
      const Gradient* g = &u.grad[q * u.n];
      for (int i = 0; i < u.n; ++i) {
        for (int j = 0; j < u.n; ++j) {
          const double gg = grad_weight * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
          for (int d = 0; d < 2; ++d) {
            for (int c = 0; c < 2; ++c) {
              double v = div_weight * g[i][d] * g[j][c];
              if (c == d) v += gg;
              K(2 * i + d, 2 * j + c) += w * v;
            }
          }
        }
      }
    }
    scatter_block(*matrix, u.dofs, u.dofs, K);
  });
  assemble_gradient_jump(matrix);
}

void Assembler::assemble_gradient_jump(CsrMatrix* matrix) const {
  if (!matrix) return;
  const int k = fe_.orders().k;
  const LineRule line = edge_rule(face_degree_);
  const ReferenceElement& ref = reference_element(k);
  const int n = ref.num_nodes();
  std::vector<Gradient> gm(n), gp(n);
  Eigen::MatrixXd K(2 * n, 2 * n);
  Eigen::VectorXd jump(2 * n);
  std::vector<int> dofs_c(2 * n);
  for (const auto& face : mesh_.faces()) {
    if (!face.interior()) continue;
    const ElementMap mm(mesh_.element_points(face.minus));
    const ElementMap mp(mesh_.element_points(face.plus));
    const Point& a = mesh_.vertices()[face.vertices[0]];
    const Point& b = mesh_.vertices()[face.vertices[1]];
    const double coeff = params_.gamma_u * face.length * coeffs_.xi(face.length);
    K.setZero();
    for (int q = 0; q < line.size(); ++q) {
      const double t = line.points[q];
      const Point x{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
      ref.gradients(mm.to_reference(x), gm.data());
      ref.gradients(mp.to_reference(x), gp.data());
      for (int i = 0; i < n; ++i) {
        const Gradient gi = mm.gradient(gm[i]);
        const Gradient gj = mp.gradient(gp[i]);
        jump[i] = gi[0] * face.normal[0] + gi[1] * face.normal[1];
        jump[n + i] = -(gj[0] * face.normal[0] + gj[1] * face.normal[1]);
      }
      K.noalias() += (line.weights[q] * face.length * coeff) * jump * jump.transpose();
    }
    const int* nm = fe_.velocity().nodes().element_nodes(face.minus);
    const int* np = fe_.velocity().nodes().element_nodes(face.plus);
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < n; ++i) {
        dofs_c[i] = fe_.velocity().dof(nm[i], c);
        dofs_c[n + i] = fe_.velocity().dof(np[i], c);
      }
      scatter_block(*matrix, dofs_c, dofs_c, K);
    }
  }
}

void Assembler::assemble_dual_stabilizer(CsrMatrix* matrix) const {
  if (!matrix) return;
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis &z = ws.z, &y = ws.y;
    Eigen::MatrixXd Kz = Eigen::MatrixXd::Zero(2 * z.n, 2 * z.n);
    Eigen::MatrixXd Ky = Eigen::MatrixXd::Zero(y.n, y.n);
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      const double w = ws.w[q];
      const Gradient* g = &z.grad[q * z.n];
      for (int i = 0; i < z.n; ++i) {
        for (int j = 0; j < z.n; ++j) {
          const double v = w * params_.gamma_u_star * (g[i][0] * g[j][0] + g[i][1] * g[j][1]);
          Kz(2 * i, 2 * j) -= v;
          Kz(2 * i + 1, 2 * j + 1) -= v;
        }
      }
      const double* eta = &y.val[q * y.n];
      for (int i = 0; i < y.n; ++i) {
        for (int j = 0; j < y.n; ++j) Ky(i, j) -= w * params_.gamma_p_star * eta[i] * eta[j];
      }
    }
    scatter_block(*matrix, z.dofs, z.dofs, Kz);
    scatter_block(*matrix, y.dofs, y.dofs, Ky);
  });
}

void Assembler::assemble_pressure_data(CsrMatrix* matrix, Eigen::VectorXd* rhs) const {
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis& p = ws.p;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(p.n, p.n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(p.n);
    for (std::size_t q = 0; q < ws.x.size(); ++q) {
      const double w = ws.w[q] * params_.gamma_P;
      const double* psi = &p.val[q * p.n];
      const double exact = rhs ? problem_.pressure(ws.x[q]) : 0.0;
      for (int i = 0; i < p.n; ++i) {
        r[i] += w * exact * psi[i];
        for (int j = 0; j < p.n; ++j) K(i, j) += w * psi[i] * psi[j];
      }
    }
    if (matrix) scatter_block(*matrix, p.dofs, p.dofs, K);
    if (rhs) scatter_vector(*rhs, p.dofs, r);
  });
}

void Assembler::assemble_mean_constraint(CsrMatrix* matrix) const {
  if (!matrix) return;
  const int lambda = fe_.multiplier();
  for_each_element(false, [&](const Workspace& ws) {
    const FieldBasis& p = ws.p;
    for (int i = 0; i < p.n; ++i) {
      double s = 0.0;
      for (std::size_t q = 0; q < ws.x.size(); ++q) s += ws.w[q] * p.val[q * p.n + i];
      matrix->add(lambda, p.dofs[i], s);
      matrix->add(p.dofs[i], lambda, s);
    }
  });
}

SaddleSystem Assembler::assemble_system(bool pressure_data, const Eigen::VectorXd* noise) const {
  SaddleSystem s{zero_matrix(), zero_vector(), BlockLayout::of(fe_)};
  assemble_coupling(&s.matrix, &s.rhs);
  assemble_measurement(&s.matrix, &s.rhs, noise);
  assemble_gls(&s.matrix, &s.rhs);
  assemble_cip(&s.matrix);
  assemble_dual_stabilizer(&s.matrix);
  if (pressure_data) assemble_pressure_data(&s.matrix, &s.rhs);
  assemble_mean_constraint(&s.matrix);
  return s;
}

Eigen::VectorXd Assembler::assemble_rhs(bool pressure_data, const Eigen::VectorXd* noise) const {
  Eigen::VectorXd rhs = zero_vector();
  assemble_coupling(nullptr, &rhs);
  assemble_measurement(nullptr, &rhs, noise);
  assemble_gls(nullptr, &rhs);
  if (pressure_data) assemble_pressure_data(nullptr, &rhs);
  return rhs;
}

SaddleSystem assemble_full(const Mesh& mesh, const FeSystem& fe, const ProblemCase& problem,
                           const StabilizationParams& params, bool pressure_data, const Eigen::VectorXd* noise) {
  const Assembler assembler(mesh, fe, problem, params);
  return assembler.assemble_system(pressure_data, noise);
}

}  // namespace ucflow

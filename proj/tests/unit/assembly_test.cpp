#include <doctest.h>

#include <cmath>
#include <random>

#include "ucflow/assembly.hpp"
#include "ucflow/integrate.hpp"
#include "ucflow/verify.hpp"

using namespace ucflow;

namespace {

// Independent evaluation of a(u, w) - b(p, w) - (f, w) with the exact fields
// for every dual velocity basis function. Returns the largest magnitude.
double continuous_residual(const Mesh& mesh, const FeSystem& fe, const ProblemCase& c, int degree) {
  const DofMap& z = fe.dual_velocity();
  const ReferenceElement& el = reference_element(z.order());
  const QuadratureRule& rule = triangle_rule(degree);
  const Tabulation tab = tabulate(el, rule.points);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(z.size());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ElementMap map(mesh.element_points(e));
    const int* nodes = z.nodes().element_nodes(e);
    for (int q = 0; q < rule.size(); ++q) {
      const Point x = map.to_physical(rule.points[q]);
      const double w = rule.weights[q] * map.det;
      const Mat2 gu = c.velocity_gradient(x);
      const Mat2 gU = c.base_flow_gradient(x);
      const Vec2 u = c.velocity(x), U = c.base_flow(x), f = c.source(x);
      const double p = c.pressure(x);
      // Convective part (U.grad)u + (u.grad)U minus the source.
      Vec2 conv{};
      for (int i = 0; i < 2; ++i) conv[i] = U[0] * gu[2 * i] + U[1] * gu[2 * i + 1] + u[0] * gU[2 * i] + u[1] * gU[2 * i + 1] - f[i];
      for (int a = 0; a < el.num_nodes(); ++a) {
        const double phi = tab.values[q * tab.num_basis + a];
        const Gradient g = map.gradient(tab.gradients[q * tab.num_basis + a]);
        for (int i = 0; i < 2; ++i) {
          const int l = z.local_dof(nodes[a], i);
          if (l < 0) continue;
          r[l] += w * (c.nu * (gu[2 * i] * g[0] + gu[2 * i + 1] * g[1]) - p * g[i] + conv[i] * phi);
        }
      }
    }
  }
  return r.lpNorm<Eigen::Infinity>();
}

Eigen::VectorXd exact_primal(const Assembler& a, const ProblemCase& c) {
  Eigen::VectorXd X = a.zero_vector();
  scatter(a.fe().velocity(), interpolate(a.fe().velocity(), VectorField(c.velocity)), X);
  scatter(a.fe().pressure(), interpolate(a.fe().pressure(), ScalarField(c.pressure)), X);
  return X;
}

}  // namespace

TEST_SUITE("assembly") {
  TEST_CASE("block layout of the two-by-two mesh") {
    const Mesh m = build_unit_square_mesh(2);
    const FeSystem fe(m, Orders::from_preset(1, OrderPreset::Equal));
    const BlockLayout b = BlockLayout::of(fe);
    CHECK(b.velocity_size == 18);
    CHECK(b.pressure_size == 9);
    CHECK(b.dual_velocity_size == 2);
    CHECK(b.dual_pressure_size == 9);
    CHECK(b.size == 39);
  }

  TEST_CASE("coupling entries by hand") {
    const Mesh m = build_unit_square_mesh(2);
    const FeSystem fe(m, Orders::from_preset(1, OrderPreset::Equal));
    const ProblemCase c = stokes_case(Geometry::Convex);
    const Assembler a(m, fe, c, {});
    CsrMatrix C = a.zero_matrix();
    Eigen::VectorXd l = a.zero_vector();
    a.assemble_coupling(&C, &l);
    // Centre vertex: the only free dual node; P1 stiffness diagonal is 4.
    int centre = -1;
    for (int v = 0; v < m.num_vertices(); ++v) {
      if (!m.boundary_vertex_flags()[v]) centre = v;
    }
    REQUIRE(centre >= 0);
    const int zx = fe.dual_velocity().dof(centre, 0);
    const int ux = fe.velocity().dof(centre, 0);
    const int uy = fe.velocity().dof(centre, 1);
    CHECK(C.coeff(zx, ux) == doctest::Approx(4.0));
    CHECK(C.coeff(zx, uy) == doctest::Approx(0.0));
    CHECK(C.coeff(ux, zx) == doctest::Approx(4.0));
    CHECK(l.norm() == 0.0);

    // Constant pressure against a field vanishing on the boundary.
    Eigen::VectorXd P = a.zero_vector();
    scatter(fe.pressure(), Eigen::VectorXd::Ones(fe.pressure().size()), P);
    const Eigen::VectorXd r = C.multiply(P);
    CHECK(r.segment(fe.dual_velocity().offset(), fe.dual_velocity().size()).lpNorm<Eigen::Infinity>() < 1e-14);
  }

  TEST_CASE("weak consistency with the exact solution") {
    const Mesh m = build_unit_square_mesh(8);
    for (const ProblemCase& c : {stokes_case(Geometry::Convex), poiseuille_case(1e-2), poiseuille_case(0.0)}) {
      const FeSystem fe(m, Orders::from_preset(2, OrderPreset::Equal));
      CHECK(continuous_residual(m, fe, c, volume_degree(2)) <= 1e-9);
    }
  }

  TEST_CASE("exact discrete solution satisfies the system up to the gradient penalty") {
    // Quartic velocity and cubic pressure are reproduced exactly by P4.
    const Mesh m = build_unit_square_mesh(4);
    const FeSystem fe(m, Orders::from_preset(4, OrderPreset::Equal));
    for (const ProblemCase& c : {stokes_case(Geometry::Convex), poiseuille_case(1e-2)}) {
      for (bool aug : {false, true}) {
        StabilizationParams params;
        const Assembler a(m, fe, c, params);
        const SaddleSystem s = a.assemble_system(aug);
        const Eigen::VectorXd X = exact_primal(a, c);
        params.gamma_u = 0.0;
        params.gamma_div = 0.0;
        const Assembler only_alpha(m, fe, c, params);
        CsrMatrix K = only_alpha.zero_matrix();
        only_alpha.assemble_cip(&K);
        const Eigen::VectorXd r = s.matrix.multiply(X) - s.rhs - K.multiply(X);
        CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-11 * s.rhs.lpNorm<Eigen::Infinity>());
      }
    }
  }

  TEST_CASE("measurement term") {
    const Mesh m = build_unit_square_mesh(20);
    const FeSystem fe(m, Orders::from_preset(1, OrderPreset::Equal));
    const ProblemCase c = stokes_case(Geometry::Convex);
    const StabilizationParams params;
    const Assembler a(m, fe, c, params);
    CHECK(a.xi_global() == 1.0);
    CsrMatrix M = a.zero_matrix();
    a.assemble_measurement(&M, nullptr, nullptr);
    Eigen::VectorXd e = a.zero_vector();
    scatter(fe.velocity(), interpolate(fe.velocity(), VectorField([](const Point&) { return Vec2{1.0, 0.0}; })), e);
    // Hole edges lie on grid lines, so the measured area is exact.
    CHECK(M.quadratic_form(e, e) == doctest::Approx(params.gamma_M * 0.4).epsilon(1e-12));

    // Data term with omega_M = Omega and exactly representable data.
    ProblemCase full = c;
    full.measurement = Region::rectangle(Box{});
    const Mesh m4 = build_unit_square_mesh(3);
    const FeSystem fe4(m4, Orders::from_preset(4, OrderPreset::Equal));
    const Assembler a4(m4, fe4, full, params);
    CsrMatrix M4 = a4.zero_matrix();
    Eigen::VectorXd rhs = a4.zero_vector();
    a4.assemble_measurement(&M4, &rhs, nullptr);
    const Eigen::VectorXd X = exact_primal(a4, full);
    const Eigen::VectorXd r = M4.multiply(X) - rhs;
    CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-12 * rhs.lpNorm<Eigen::Infinity>());
  }

  TEST_CASE("GLS term") {
    const ProblemCase c = stokes_case(Geometry::Convex);
    {
      const Mesh m = build_unit_square_mesh(4);
      const FeSystem fe(m, Orders::from_preset(1, OrderPreset::Equal));
      const Assembler a(m, fe, c, {});
      CsrMatrix S = a.zero_matrix();
      Eigen::VectorXd rhs = a.zero_vector();
      a.assemble_gls(&S, &rhs);
      CHECK(rhs.norm() == 0.0);  // f = 0
      // Linear velocities have no Laplacian: only the pressure block remains.
      const int nu = fe.velocity().size();
      double velocity_block = 0.0;
      for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nu; ++j) velocity_block = std::max(velocity_block, std::abs(S.coeff(i, j)));
      }
      CHECK(velocity_block == 0.0);
    }
    std::vector<double> values;
    for (int n : {4, 8, 16}) {
      const Mesh m = build_unit_square_mesh(n);
      const FeSystem fe(m, Orders::from_preset(3, OrderPreset::Equal));
      const Assembler a(m, fe, c, {});
      CsrMatrix S = a.zero_matrix();
      a.assemble_gls(&S, nullptr);
      const Eigen::VectorXd X = exact_primal(a, c);
      values.push_back(S.quadratic_form(X, X));
    }
    CHECK(std::log2(values[1] / values[2]) >= 2 * 3 - 0.3);
  }

  TEST_CASE("gradient jump and divergence penalties") {
    const ProblemCase c = stokes_case(Geometry::Convex);
    for (int k = 1; k <= 3; ++k) {
      std::vector<double> jump, div;
      for (int n : {8, 16, 32}) {
        const Mesh m = build_unit_square_mesh(n);
        const FeSystem fe(m, Orders::from_preset(k, OrderPreset::Equal));
        StabilizationParams params;
        const Assembler a(m, fe, c, params);
        CsrMatrix J = a.zero_matrix();
        a.assemble_gradient_jump(&J);
        params.alpha = 0.0;
        params.gamma_u = 0.0;
        const Assembler da(m, fe, c, params);
        CsrMatrix D = da.zero_matrix();
        da.assemble_cip(&D);
        const Eigen::VectorXd X = exact_primal(a, c);
        jump.push_back(std::sqrt(J.quadratic_form(X, X)));
        div.push_back(std::sqrt(D.quadratic_form(X, X)));
      }
      CAPTURE(k);
      CHECK(std::log2(jump[1] / jump[2]) >= k - 0.2);
      CHECK(std::log2(div[1] / div[2]) >= k - 0.2);
    }
    CHECK(check_jump_polynomials({}).passed);
  }

  TEST_CASE("dual stabilizer") {
    const Mesh m = build_unit_square_mesh(4);
    const FeSystem fe(m, Orders::from_preset(2, OrderPreset::Equal));
    const StabilizationParams params;
    const Assembler a(m, fe, stokes_case(Geometry::Convex), params);
    CsrMatrix S = a.zero_matrix();
    a.assemble_dual_stabilizer(&S);
    Eigen::VectorXd y = a.zero_vector();
    scatter(fe.dual_pressure(), Eigen::VectorXd::Ones(fe.dual_pressure().size()), y);
    CHECK(-S.quadratic_form(y, y) == doctest::Approx(params.gamma_p_star).epsilon(1e-12));

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int s = 0; s < 10; ++s) {
      Eigen::VectorXd Z = a.zero_vector();
      for (int i = fe.dual_velocity().offset(); i < fe.multiplier(); ++i) Z[i] = uniform(rng);
      CHECK(-S.quadratic_form(Z, Z) > 0.0);
    }
  }

  TEST_CASE("pressure data term") {
    const Mesh m = build_unit_square_mesh(4);
    const ProblemCase c = stokes_case(Geometry::Convex);
    const FeSystem fe(m, Orders::from_preset(3, OrderPreset::Equal));
    StabilizationParams params;
    const Assembler a(m, fe, c, params);
    CsrMatrix P = a.zero_matrix();
    Eigen::VectorXd rhs = a.zero_vector();
    a.assemble_pressure_data(&P, &rhs);
    const Eigen::VectorXd X = exact_primal(a, c);
    CHECK((P.multiply(X) - rhs).lpNorm<Eigen::Infinity>() <= 1e-10);

    params.gamma_P = 0.0;
    const Assembler zero(m, fe, c, params);
    const SaddleSystem with = zero.assemble_system(true);
    const SaddleSystem without = zero.assemble_system(false);
    CHECK(with.matrix.values() == without.matrix.values());
    CHECK(with.rhs == without.rhs);
  }

  TEST_CASE("symmetry and the stability identity") {
    const Mesh m = build_unit_square_mesh(4);
    const FeSystem fe(m, Orders::from_preset(2, OrderPreset::Equal));
    const SaddleSystem s = assemble_full(m, fe, stokes_case(Geometry::Convex), {}, false);
    CHECK(s.matrix.max_asymmetry() <= 1e-12 * s.matrix.max_abs());
    CHECK(check_symmetry({}).passed);
    CHECK(check_norm_identity({}).passed);
  }
}

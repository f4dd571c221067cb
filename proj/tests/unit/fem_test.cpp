#include <doctest.h>

#include <cmath>
#include <random>

#include "ucflow/cases.hpp"
#include "ucflow/dofmap.hpp"
#include "ucflow/integrate.hpp"
#include "ucflow/lagrange.hpp"
#include "ucflow/quadrature.hpp"

using namespace ucflow;

namespace {

double integrate_monomial(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i) s += rule.weights[i] * std::pow(rule.points[i][0], a) * std::pow(rule.points[i][1], b);
  return s;
}

}  // namespace

TEST_SUITE("fem") {
  TEST_CASE("triangle rules") {
    const QuadratureRule& r1 = triangle_rule(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.weights[0] == doctest::Approx(0.5));
    CHECK(r1.points[0][0] == doctest::Approx(1.0 / 3));
    for (int d = 1; d <= kMaxTriangleDegree; ++d) {
      const QuadratureRule& r = triangle_rule(d);
      CHECK(r.degree >= d);
      CHECK(std::abs(integrate_monomial(r, 1, 0) - 1.0 / 6) < 1e-12);
      if (d >= 4) CHECK(std::abs(integrate_monomial(r, 2, 2) - 1.0 / 180) < 1e-12);
      for (double w : r.weights) CHECK(w > 0.0);
      for (const Point& p : r.points) CHECK((p[0] >= 0.0 && p[1] >= 0.0 && p[0] + p[1] <= 1.0));
    }
    CHECK_THROWS(triangle_rule(kMaxTriangleDegree + 1));
  }

  TEST_CASE("edge rules") {
    const LineRule r1 = edge_rule(1);
    REQUIRE(r1.size() == 1);
    CHECK(r1.points[0] == doctest::Approx(0.5));
    CHECK(r1.weights[0] == doctest::Approx(1.0));
    for (int d = 1; d <= 12; ++d) {
      const LineRule r = edge_rule(d);
      double sum = 0.0, cube = 0.0;
      for (int i = 0; i < r.size(); ++i) {
        sum += r.weights[i];
        cube += r.weights[i] * std::pow(r.points[i], 3);
      }
      CHECK(std::abs(sum - 1.0) < 1e-14);
      if (d >= 3) CHECK(std::abs(cube - 0.25) < 1e-14);
    }
  }

  TEST_CASE("linear basis") {
    const ReferenceElement& p1 = reference_element(1);
    const auto v = eval_basis(p1, {0.0, 0.0}, 0);
    CHECK(v == std::vector<double>{1.0, 0.0, 0.0});
    for (double h : eval_basis(p1, {0.3, 0.2}, 2)) CHECK(h == 0.0);
    CHECK_THROWS_AS(eval_basis(p1, {0.3, 0.2}, 3), std::invalid_argument);
  }

  TEST_CASE("quadratic basis matches the closed forms") {
    const ReferenceElement& p2 = reference_element(2);
    REQUIRE(p2.num_nodes() == 6);
    const Point c{1.0 / 3, 1.0 / 3};
    const auto v = eval_basis(p2, c, 0);
    double sum = 0.0;
    for (double x : v) sum += x;
    CHECK(sum == doctest::Approx(1.0));
    // Barycentrics of the centroid are all 1/3.
    const double vertex = (1.0 / 3) * (2.0 / 3 - 1.0);
    const double edge = 4.0 / 9;
    for (int i = 0; i < 3; ++i) CHECK(v[i] == doctest::Approx(vertex));
    for (int i = 3; i < 6; ++i) CHECK(v[i] == doctest::Approx(edge));

    // Generic point, with the node positions telling which formula applies.
    const Point x{0.21, 0.37};
    const double l[3] = {1.0 - x[0] - x[1], x[0], x[1]};
    const auto w = eval_basis(p2, x, 0);
    for (int i = 0; i < 3; ++i) CHECK(w[i] == doctest::Approx(l[i] * (2 * l[i] - 1)));
    for (int i = 3; i < 6; ++i) {
      const int e = p2.locations()[i].index;
      CHECK(w[i] == doctest::Approx(4 * l[(e + 1) % 3] * l[(e + 2) % 3]));
    }
  }

  TEST_CASE("Lagrange property and derivative consistency") {
    for (int k = 1; k <= kMaxOrder; ++k) {
      const ReferenceElement& el = reference_element(k);
      CHECK(el.num_nodes() == (k + 1) * (k + 2) / 2);
      for (int i = 0; i < el.num_nodes(); ++i) {
        const auto v = eval_basis(el, el.nodes()[i], 0);
        for (int j = 0; j < el.num_nodes(); ++j) CHECK(std::abs(v[j] - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
      // Central differences against the analytic gradient and Hessian.
      const Point x{0.23, 0.41};
      const double eps = 1e-5;
      const auto g = eval_basis(el, x, 1);
      const auto h = eval_basis(el, x, 2);
      const auto vx1 = eval_basis(el, {x[0] + eps, x[1]}, 0), vx0 = eval_basis(el, {x[0] - eps, x[1]}, 0);
      const auto vy1 = eval_basis(el, {x[0], x[1] + eps}, 0), vy0 = eval_basis(el, {x[0], x[1] - eps}, 0);
      const auto gy1 = eval_basis(el, {x[0], x[1] + eps}, 1), gy0 = eval_basis(el, {x[0], x[1] - eps}, 1);
      for (int i = 0; i < el.num_nodes(); ++i) {
        CHECK(g[2 * i] == doctest::Approx((vx1[i] - vx0[i]) / (2 * eps)).epsilon(1e-6));
        CHECK(g[2 * i + 1] == doctest::Approx((vy1[i] - vy0[i]) / (2 * eps)).epsilon(1e-6));
        CHECK(h[3 * i + 1] == doctest::Approx((gy1[2 * i] - gy0[2 * i]) / (2 * eps)).epsilon(1e-6));
        CHECK(h[3 * i + 2] == doctest::Approx((gy1[2 * i + 1] - gy0[2 * i + 1]) / (2 * eps)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("DOF layout of the four fields") {
    const Mesh m = build_unit_square_mesh(2);
    const FeSystem fe(m, Orders::from_preset(1, OrderPreset::Equal));
    CHECK(fe.velocity().size() == 18);
    CHECK(fe.pressure().size() == 9);
    CHECK(fe.dual_velocity().size() == 2);
    CHECK(fe.dual_pressure().size() == 9);
    CHECK(fe.size() == 39);
    CHECK(fe.pressure().offset() == 18);
    CHECK(fe.dual_velocity().offset() == 27);
    CHECK(fe.dual_pressure().offset() == 29);
    CHECK(fe.multiplier() == 38);
    CHECK(fe.dual_velocity().dirichlet());
    CHECK(fe.pressure().zero_mean());
  }

  TEST_CASE("order presets") {
    const Orders eq = Orders::from_preset(3, OrderPreset::Equal);
    CHECK((eq.k1 == 3 && eq.k2 == 3 && eq.k3 == 3));
    const Orders mn = Orders::from_preset(3, OrderPreset::Minimal);
    CHECK((mn.k1 == 1 && mn.k2 == 2 && mn.k3 == 1));
    CHECK(Orders::from_preset(1, OrderPreset::Minimal).k2 == 1);
    CHECK(parse_preset("minimal") == OrderPreset::Minimal);
    CHECK(to_string(OrderPreset::Equal) == "equal");
    CHECK_THROWS(parse_preset("cubic"));
  }

  TEST_CASE("interpolation reproduces polynomials") {
    const Mesh m = build_unit_square_mesh(3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int k = 1; k <= kMaxOrder; ++k) {
      const FeSystem fe(m, Orders::from_preset(k, OrderPreset::Equal));
      const Eigen::VectorXd one = interpolate(fe.pressure(), ScalarField([](const Point&) { return 1.0; }));
      CHECK(one.minCoeff() == 1.0);
      CHECK(one.maxCoeff() == 1.0);

      const ScalarField poly = [k](const Point& x) { return std::pow(x[0] - 0.3, k) + 2 * std::pow(x[1], k) - (k > 1 ? x[0] * x[1] : x[0]); };
      const Eigen::VectorXd c = interpolate(fe.pressure(), poly);
      for (int s = 0; s < 20; ++s) {
        const int e = static_cast<int>(uniform(rng) * m.num_elements());
        Point xi{uniform(rng), uniform(rng)};
        if (xi[0] + xi[1] > 1.0) xi = {1.0 - xi[0], 1.0 - xi[1]};
        const Point x = ElementMap(m.element_points(e)).to_physical(xi);
        CHECK(std::abs(evaluate_scalar(fe.pressure(), c, e, xi) - poly(x)) < 1e-11);
      }
    }
  }

  TEST_CASE("cubic interpolation of the Stokes velocity converges at order four") {
    const ProblemCase c = stokes_case(Geometry::Convex);
    std::vector<double> err;
    for (int n : {4, 8, 16}) {
      const Mesh m = build_unit_square_mesh(n);
      const FeSystem fe(m, Orders::from_preset(3, OrderPreset::Equal));
      const Eigen::VectorXd u = interpolate(fe.velocity(), VectorField(c.velocity));
      const VectorField exact = c.velocity;
      err.push_back(std::sqrt(l2_distance_squared(m, VectorSource{&fe.velocity(), &u, nullptr},
                                                  VectorSource{nullptr, nullptr, &exact}, nullptr, 8)));
    }
    CHECK(std::log2(err[1] / err[2]) >= 4.0 - 0.05);
  }

  TEST_CASE("measured area of the convex data region") {
    const Region omega = stokes_case(Geometry::Convex).measurement;
    CHECK(std::abs(region_measure(build_unit_square_mesh(8), omega, 4) - 0.4) <= std::sqrt(2.0) / 8);
    // Hole boundaries on grid lines: quadrature points never sit on them.
    CHECK(region_measure(build_unit_square_mesh(20), omega, 4) == doctest::Approx(0.4).epsilon(1e-12));
  }
}

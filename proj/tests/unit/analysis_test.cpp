#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ucflow/analysis.hpp"
#include "ucflow/cases.hpp"

using namespace ucflow;

TEST_SUITE("analysis") {
  TEST_CASE("observed orders") {
    const std::vector<double> hs{0.2, 0.1};
    CHECK(eoc(std::vector<double>{0.1, 0.025}, hs)[0] == doctest::Approx(2.0));
    CHECK(eoc(std::vector<double>{0.3, 0.3}, hs)[0] == doctest::Approx(0.0));
    CHECK(eoc(std::vector<double>{1.0, 0.125}, hs)[0] == doctest::Approx(3.0));
    CHECK(eoc(std::vector<double>{1.0, 0.5, 0.125}, std::vector<double>{0.4, 0.2, 0.1}).size() == 2);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0}, std::vector<double>{0.1}), std::invalid_argument);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, 0.5}, std::vector<double>{0.1}), std::invalid_argument);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, 0.0}, hs), std::invalid_argument);
  }

  TEST_CASE("relative L2 errors") {
    const Mesh m = build_unit_square_mesh(4);
    const ProblemCase c = stokes_case(Geometry::Convex);
    const FeSystem fe(m, Orders::from_preset(4, OrderPreset::Equal));
    const VectorField u = c.velocity;
    const ScalarField p = c.pressure;
    const Eigen::VectorXd uh = interpolate(fe.velocity(), u);
    const Eigen::VectorXd ph = interpolate(fe.pressure(), p);
    CHECK(error_L2(m, &c.target, u, fe.velocity(), uh, 10) <= 1e-11);
    CHECK(error_L2(m, nullptr, p, fe.pressure(), ph, 10) <= 1e-11);
    CHECK(error_L2(m, nullptr, u, fe.velocity(), Eigen::VectorXd::Zero(uh.size()), 10) == doctest::Approx(1.0));
    const VectorField zero = [](const Point&) { return Vec2{0.0, 0.0}; };
    CHECK_THROWS_AS(error_L2(m, nullptr, zero, fe.velocity(), uh, 10), std::domain_error);
  }

  TEST_CASE("residual quantity") {
    const ProblemCase c = stokes_case(Geometry::Convex);
    const VectorField u = c.velocity;
    for (int k = 1; k <= 3; ++k) {
      const Mesh m = build_unit_square_mesh(4);
      const FeSystem fe(m, Orders::from_preset(k, OrderPreset::Equal));
      CHECK(residual_quantity(m, fe.velocity(), interpolate(fe.velocity(), u), u, 0.1) == 0.0);
      // Global polynomial of degree <= k: both jumps vanish.
      const VectorField poly = [k](const Point& x) { return Vec2{std::pow(x[0], k) - x[1], std::pow(x[0] + x[1], k)}; };
      CHECK(residual_quantity(m, fe.velocity(), Eigen::VectorXd::Zero(fe.velocity().size()), poly, 0.1) <= 1e-11);
    }
  }

  TEST_CASE("CSV layout") {
    ConvergenceRecord record;
    for (int n : {8, 16}) {
      MeshResult r;
      r.n_div = n;
      r.h = std::sqrt(2.0) / n;
      r.err_uB = 1.0 / (n * n);
      r.err_uOmega = r.err_p = r.residual_q = 0.5;
      r.solve.relative_residual = 1e-13;
      r.seconds = 1.25;
      record.rows.push_back(r);
    }
    std::ostringstream out;
    write_csv(out, record, false);
    std::istringstream in(out.str());
    std::string header, first, second;
    std::getline(in, header);
    std::getline(in, first);
    std::getline(in, second);
    CHECK(header == kCsvHeader);
    CHECK(first.find(",,") != std::string::npos);  // no EOC on the first row
    CHECK(second.find(",2.000000,") != std::string::npos);
    CHECK(second.substr(second.rfind(',') + 1) == "0.000");
    std::ostringstream timed;
    write_csv(timed, record, true);
    CHECK(timed.str().find("1.250") != std::string::npos);
    CHECK(record.finest_eoc_uB() == doctest::Approx(2.0));
  }
}

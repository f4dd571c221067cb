#include <doctest.h>

#include <sstream>

#include "ucflow/study.hpp"

using namespace ucflow;

namespace {

std::string validation_message(const RunConfig& c, bool sweep = false) {
  try {
    c.validate(sweep);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("study") {
  TEST_CASE("default parameters") {
    const StabilizationParams p;
    for (double v : {p.alpha, p.gamma_u, p.gamma_div, p.gamma_gls, p.gamma_u_star, p.gamma_p_star}) CHECK(v == 0.1);
    CHECK(p.gamma_M == 1000.0);
  }

  TEST_CASE("configuration validation") {
    RunConfig c;
    CHECK(validation_message(c).empty());
    CHECK(validation_message(c, true).find("two meshes") != std::string::npos);

    RunConfig bad = c;
    bad.params.gamma_M = 0.0;
    CHECK(validation_message(bad).find("measurement weight") != std::string::npos);
    bad = c;
    bad.case_id = "unknown";
    const std::string msg = validation_message(bad);
    CHECK(msg.find("stokes-convex") != std::string::npos);
    CHECK(msg.find("poiseuille") != std::string::npos);
    bad = c;
    bad.noise = NoiseRecipe{2, 1};
    CHECK(validation_message(bad).find("theta") != std::string::npos);
    bad = c;
    bad.nu = 0.5;
    CHECK_FALSE(validation_message(bad).empty());
    bad.case_id = "poiseuille";
    CHECK(validation_message(bad).empty());
    bad.nu = -1.0;
    CHECK_FALSE(validation_message(bad).empty());
    bad = c;
    bad.k = 5;
    CHECK_FALSE(validation_message(bad).empty());
    bad = c;
    bad.pressure_data = true;
    bad.params.gamma_P = 0.0;
    CHECK_FALSE(validation_message(bad).empty());
  }

  TEST_CASE("single solve") {
    RunConfig c;
    c.k = 2;
    c.meshes = {16};
    const ConvergenceRecord r = run_single(c);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.complete);
    CHECK(r.rows[0].err_uB > 0.0);
    CHECK(r.rows[0].solve.relative_residual <= kResidualContract);
    CHECK(r.rows[0].triple.total() > 0.0);
  }

  TEST_CASE("reruns are byte-identical") {
    RunConfig c;
    c.meshes = {4, 8};
    c.noise = NoiseRecipe{1, 7};
    std::ostringstream a, b;
    write_csv(a, run_convergence(c), false);
    write_csv(b, run_convergence(c), false);
    CHECK(a.str() == b.str());
  }

  TEST_CASE("clean and noisy solves share a factorization") {
    const Discretization d(stokes_case(Geometry::Convex), 8, 2, {});
    const MeshResult clean = d.solve();
    const MeshResult noisy = d.solve(NoiseRecipe{2, 1});
    CHECK(noisy.err_uB > clean.err_uB);
    CHECK(noisy.solve.relative_residual <= kResidualContract);
  }

  TEST_CASE("Poiseuille runs with zero pressure") {
    RunConfig c;
    c.case_id = "poiseuille";
    c.nu = 0.0;
    c.k = 2;
    c.meshes = {8};
    const ConvergenceRecord r = run_single(c);
    CHECK_FALSE(r.rows[0].err_p_relative);
    c.pressure_data = true;
    CHECK(run_single(c).rows[0].err_uB <= r.rows[0].err_uB);
  }

  TEST_CASE("report mirrors the configuration") {
    RunConfig c;
    c.meshes = {4, 8};
    c.k = 2;
    const ConvergenceRecord r = run_convergence(c);
    const nlohmann::json j = make_report(c, r);
    CHECK(j["config"]["case"] == "stokes-convex");
    CHECK(j["config"]["k"] == 2);
    CHECK(j["config"]["meshes"] == std::vector<int>{4, 8});
    CHECK(j["config"]["noise"].is_null());
    CHECK(j["results"]["rows"].size() == 2);
    CHECK(j["results"]["complete"] == true);
    CHECK(j["results"]["rows"][1]["solver"]["relative_residual"].get<double>() <= kResidualContract);
  }
}

// Command-line driver: solve, converge, verify.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ucflow/study.hpp"
#include "ucflow/verify.hpp"

namespace {

using ucflow::RunConfig;

struct Options {
  RunConfig config;
  std::string preset = "equal";
  int n = 8;
  int theta = 0;
  std::uint64_t seed = 1;
  double nu = 1.0;
  CLI::Option* theta_opt = nullptr;
  CLI::Option* nu_opt = nullptr;
};

void add_run_options(CLI::App& app, Options& o, bool sweep) {
  RunConfig& c = o.config;
  app.add_option("--case", c.case_id, "stokes-convex | stokes-nonconvex | poiseuille")->capture_default_str();
  app.add_option("--k", c.k, "primal velocity order")->capture_default_str();
  app.add_option("--preset", o.preset, "dual/pressure orders: equal | minimal")->capture_default_str();
  if (sweep) {
    app.add_option("--meshes", c.meshes, "subdivisions per side, e.g. --meshes 8 16 32")->required();
  } else {
    app.add_option("--n", o.n, "subdivisions per side")->capture_default_str();
  }
  app.add_option("--alpha", c.params.alpha)->capture_default_str();
  app.add_option("--gamma-u", c.params.gamma_u)->capture_default_str();
  app.add_option("--gamma-div", c.params.gamma_div)->capture_default_str();
  app.add_option("--gamma-gls", c.params.gamma_gls)->capture_default_str();
  app.add_option("--gamma-u-star", c.params.gamma_u_star)->capture_default_str();
  app.add_option("--gamma-p-star", c.params.gamma_p_star)->capture_default_str();
  app.add_option("--gamma-M", c.params.gamma_M, "measurement weight")->capture_default_str();
  app.add_option("--gamma-P", c.params.gamma_P, "pressure-data weight")->capture_default_str();
  o.theta_opt = app.add_option("--theta", o.theta, "noise exponent; data perturbed by O(h^(k-theta))");
  app.add_option("--seed", o.seed, "noise seed")->capture_default_str();
  app.add_flag("--pressure-data", c.pressure_data, "add the pressure-data term");
  o.nu_opt = app.add_option("--nu", o.nu, "viscosity (poiseuille only)");
  app.add_option("--csv", c.csv_path, "CSV output file (default: stdout)");
  app.add_option("--report", c.report_path, "JSON report file");
  app.add_flag("--timing", c.timing, "write wall times into the CSV seconds column");
  if (!sweep) {
    app.add_option("--mesh-dump", c.mesh_dump_path, "text dump of the mesh");
    app.add_option("--matrix-dump", c.matrix_dump_path, "coordinate dump of the system matrix");
  }
}

RunConfig finalize(const Options& o, bool sweep) {
  RunConfig c = o.config;
  c.preset = ucflow::parse_preset(o.preset);
  if (!sweep) c.meshes = {o.n};
  if (o.theta_opt->count() > 0) c.noise = ucflow::NoiseRecipe{o.theta, o.seed};
  if (o.nu_opt->count() > 0) c.nu = o.nu;
  return c;
}

int emit(const RunConfig& c, const ucflow::ConvergenceRecord& record) {
  if (c.csv_path.empty()) {
    ucflow::write_csv(std::cout, record, c.timing);
  } else {
    std::ofstream out(c.csv_path);
    if (!out) throw std::runtime_error("cannot open " + c.csv_path);
    ucflow::write_csv(out, record, c.timing);
  }
  if (!c.report_path.empty()) {
    std::ofstream out(c.report_path);
    if (!out) throw std::runtime_error("cannot open " + c.report_path);
    out << ucflow::make_report(c, record).dump(2) << '\n';
  }
  if (!record.complete) {
    std::cerr << "error: sweep aborted with partial results: " << record.failure << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stabilized primal-dual finite elements for unique continuation of linearized flow"};
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.require_subcommand(1);

  Options solve_opts, sweep_opts;
  CLI::App* solve = app.add_subcommand("solve", "single solve on one mesh");
  add_run_options(*solve, solve_opts, false);
  CLI::App* converge = app.add_subcommand("converge", "convergence sweep over a mesh list");
  add_run_options(*converge, sweep_opts, true);
  CLI::App* verify = app.add_subcommand("verify", "property battery");
  std::string verify_report;
  verify->add_option("--report", verify_report, "JSON report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const RunConfig c = finalize(solve_opts, false);
      return emit(c, ucflow::run_single(c));
    }
    if (*converge) {
      const RunConfig c = finalize(sweep_opts, true);
      return emit(c, ucflow::run_convergence(c));
    }
    const ucflow::VerifyReport report = ucflow::run_verify();
    ucflow::print(std::cout, report);
    if (!verify_report.empty()) {
      nlohmann::json j;
      for (const auto& check : report.checks) {
        j["checks"].push_back(
            {{"name", check.name}, {"value", check.value}, {"tolerance", check.tolerance}, {"passed", check.passed}});
      }
      j["seconds"] = report.seconds;
      j["passed"] = report.passed();
      std::ofstream(verify_report) << j.dump(2) << '\n';
    }
    return report.passed() ? 0 : 1;
  } catch (const ucflow::ConfigError& e) {
    std::cerr << "error: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

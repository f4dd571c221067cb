#include "ucflow/study.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ucflow/integrate.hpp"

namespace ucflow {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

}  // namespace

void RunConfig::validate(bool sweep) const {
  bool known = false;
  for (const auto& name : case_names()) known = known || name == case_id;
  if (!known) {
    std::string list;
    for (const auto& name : case_names()) list += (list.empty() ? "" : ", ") + name;
    throw ConfigError("unknown case '" + case_id + "'; known cases: " + list);
  }
  require(k >= 1 && k <= kMaxOrder, "order k must lie in [1, " + std::to_string(kMaxOrder) + "]");
  require(!meshes.empty(), "at least one mesh is required");
  require(!sweep || meshes.size() >= 2, "a convergence sweep needs at least two meshes");
  for (int n : meshes) require(n >= 1, "mesh subdivisions must be positive");
  const StabilizationParams& p = params;
  require(p.alpha > 0.0, "alpha must be positive");
  require(p.gamma_u > 0.0, "gamma_u must be positive");
  require(p.gamma_div > 0.0, "gamma_div must be positive");
  require(p.gamma_gls > 0.0, "gamma_GLS must be positive");
  require(p.gamma_u_star > 0.0, "gamma_u* must be positive");
  require(p.gamma_p_star > 0.0, "gamma_p* must be positive");
  require(p.gamma_M > 0.0, "measurement weight gamma_M must be positive");
  require(!pressure_data || p.gamma_P > 0.0, "pressure-data weight gamma_P must be positive");
  if (noise) {
    require(noise->theta >= 0, "theta must be nonnegative");
    require(noise->theta <= k, "theta must not exceed k");
  }
  if (nu) {
    require(*nu >= 0.0, "viscosity must be nonnegative");
    require(case_id == "poiseuille" || *nu == 1.0, "the Stokes cases have fixed viscosity 1");
  }
}

ProblemCase RunConfig::make_case() const {
  ProblemCase c = case_by_name(case_id, nu.value_or(-1.0));
  c.pressure_augmented = pressure_data;
  c.preset = preset;
  return c;
}

Discretization::Discretization(ProblemCase problem, int n_div, int k, const StabilizationParams& params)
    : problem_(std::move(problem)),
      mesh_(build_rectangle_mesh(problem_.domain, n_div)),
      fe_(mesh_, Orders::from_preset(k, problem_.preset)),
      assembler_(mesh_, fe_, problem_, params),
      system_{assembler_.zero_matrix(), assembler_.zero_vector(), BlockLayout::of(fe_)} {
  const auto t0 = Clock::now();
  system_ = assembler_.assemble_system(problem_.pressure_augmented);
  lu_ = std::make_unique<SparseLu>(system_.matrix);
  setup_seconds_ = seconds_since(t0);
}

MeshResult Discretization::solve(const std::optional<NoiseRecipe>& noise, Solution* solution) const {
  const auto t0 = Clock::now();
  const bool aug = problem_.pressure_augmented;
  Eigen::VectorXd rhs;
  if (noise) {
    const Eigen::VectorXd du = make_noise(problem_, mesh_, fe_, *noise);
    rhs = assembler_.assemble_rhs(aug, &du);
  } else {
    rhs = system_.rhs;
  }

  SolveReport report;
  Eigen::VectorXd x = lu_->solve(rhs, &report);
  if (!(report.relative_residual <= kResidualContract)) {
    std::ostringstream s;
    s << "solver residual " << report.relative_residual << " exceeds " << kResidualContract
      << " (reciprocal condition estimate " << report.rcond << ", pivots " << report.pivot_min << " .. "
      << report.pivot_max << ")";
    throw SolverError(s.str());
  }

  MeshResult r;
  r.n_div = mesh_.n_div();
  r.h = mesh_.h();
  r.unknowns = fe_.size();
  r.solve = report;

  const BlockLayout& b = system_.blocks;
  const Eigen::VectorXd uh = x.segment(b.velocity, b.velocity_size);
  const Eigen::VectorXd ph = x.segment(b.pressure, b.pressure_size);
  const int degree = assembler_.volume_quadrature_degree();
  const VectorField u = problem_.velocity;
  const ScalarField p = problem_.pressure;
  r.err_uB = error_L2(mesh_, &problem_.target, u, fe_.velocity(), uh, degree);
  r.err_uOmega = error_L2(mesh_, nullptr, u, fe_.velocity(), uh, degree);
  const double p_norm2 = l2_distance_squared(mesh_, ScalarSource{nullptr, nullptr, &p}, ScalarSource{}, nullptr, degree);
  if (p_norm2 > 0.0) {
    r.err_p = error_L2(mesh_, nullptr, p, fe_.pressure(), ph, degree);
  } else {
    r.err_p_relative = false;
    r.err_p = std::sqrt(
        l2_distance_squared(mesh_, ScalarSource{&fe_.pressure(), &ph, nullptr}, ScalarSource{}, nullptr, degree));
  }
  r.residual_q = residual_quantity(mesh_, fe_.velocity(), uh, u, assembler_.params().gamma_u);

  // Stability-norm parts from the assembled blocks: the primal diagonal
  // block holds S_h + m (+ pressure data), the dual one holds -S*.
  Eigen::VectorXd primal = Eigen::VectorXd::Zero(x.size());
  primal.segment(b.velocity, b.velocity_size) = uh;
  primal.segment(b.pressure, b.pressure_size) = ph;
  Eigen::VectorXd dual = x - primal;
  dual[b.multiplier] = 0.0;
  const double primal_block = system_.matrix.quadratic_form(primal, primal);
  r.triple.measurement = assembler_.params().gamma_M / assembler_.xi_global() *
                         l2_distance_squared(mesh_, VectorSource{&fe_.velocity(), &uh, nullptr}, VectorSource{},
                                             &problem_.measurement, degree);
  r.triple.primal_stabilization = primal_block - r.triple.measurement;
  r.triple.dual_stabilization = -system_.matrix.quadratic_form(dual, dual);

  r.seconds = seconds_since(t0) + setup_seconds_;
  if (solution) {
    *solution = partition(b, std::move(x));
    solution->report = report;
  }
  return r;
}

ConvergenceRecord run_single(const RunConfig& config) {
  config.validate(false);
  const Discretization d(config.make_case(), config.meshes.front(), config.k, config.params);
  if (!config.mesh_dump_path.empty()) {
    auto out = open_output(config.mesh_dump_path);
    write_mesh(out, d.mesh());
  }
  if (!config.matrix_dump_path.empty()) {
    auto out = open_output(config.matrix_dump_path);
    write_coordinate(out, d.system().matrix);
  }
  ConvergenceRecord record;
  record.rows.push_back(d.solve(config.noise));
  return record;
}

ConvergenceRecord run_convergence(const RunConfig& config) {
  config.validate(true);
  const ProblemCase problem = config.make_case();
  ConvergenceRecord record;
  for (int n : config.meshes) {
    try {
      const Discretization d(problem, n, config.k, config.params);
      record.rows.push_back(d.solve(config.noise));
    } catch (const std::exception& e) {
      record.complete = false;
      record.failure = "n_div=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  return record;
}

nlohmann::json to_json(const RunConfig& c) {
  const StabilizationParams& p = c.params;
  nlohmann::json j;
  j["case"] = c.case_id;
  j["k"] = c.k;
  const Orders o = Orders::from_preset(c.k, c.preset);
  j["preset"] = to_string(c.preset);
  j["orders"] = {{"k", o.k}, {"k1", o.k1}, {"k2", o.k2}, {"k3", o.k3}};
  j["meshes"] = c.meshes;
  j["params"] = {{"alpha", p.alpha},           {"gamma_u", p.gamma_u},
                 {"gamma_div", p.gamma_div},   {"gamma_gls", p.gamma_gls},
                 {"gamma_u_star", p.gamma_u_star}, {"gamma_p_star", p.gamma_p_star},
                 {"gamma_M", p.gamma_M},       {"gamma_P", p.gamma_P}};
  if (c.noise) {
    j["noise"] = {{"theta", c.noise->theta}, {"seed", c.noise->seed}};
  } else {
    j["noise"] = nullptr;
  }
  j["pressure_data"] = c.pressure_data;
  j["nu"] = c.make_case().nu;
  return j;
}

nlohmann::json to_json(const ConvergenceRecord& record) {
  auto number_or_null = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  auto series = [&](const std::vector<double>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (double x : v) a.push_back(number_or_null(x));
    return a;
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const MeshResult& r : record.rows) {
    rows.push_back({{"n_div", r.n_div},
                    {"h", r.h},
                    {"unknowns", r.unknowns},
                    {"err_uB", r.err_uB},
                    {"err_uOmega", r.err_uOmega},
                    {"err_p", r.err_p},
                    {"err_p_relative", r.err_p_relative},
                    {"residual_q", r.residual_q},
                    {"triple_norm",
                     {{"primal_stabilization", r.triple.primal_stabilization},
                      {"measurement", r.triple.measurement},
                      {"dual_stabilization", r.triple.dual_stabilization},
                      {"total", r.triple.total()}}},
                    {"solver",
                     {{"relative_residual", r.solve.relative_residual},
                      {"rcond", r.solve.rcond},
                      {"pivot_min", r.solve.pivot_min},
                      {"pivot_max", r.solve.pivot_max},
                      {"refinement_steps", r.solve.refinement_steps},
                      {"nonzeros", r.solve.nonzeros},
                      {"factor_nonzeros", r.solve.factor_nonzeros},
                      {"factor_seconds", r.solve.factor_seconds},
                      {"solve_seconds", r.solve.solve_seconds}}},
                    {"seconds", r.seconds}});
  }
  nlohmann::json j;
  j["rows"] = rows;
  if (record.rows.size() >= 2) {
    j["eoc"] = {{"err_uB", series(record.eoc_uB())},
                {"err_uOmega", series(record.eoc_uOmega())},
                {"err_p", series(record.eoc_p())},
                {"residual_q", series(record.eoc_residual())}};
  }
  j["complete"] = record.complete;
  if (!record.complete) j["failure"] = record.failure;
  return j;
}

nlohmann::json make_report(const RunConfig& config, const ConvergenceRecord& record) {
  return {{"config", to_json(config)}, {"results", to_json(record)}};
}

}  // namespace ucflow

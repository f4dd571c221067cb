#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ucflow/analysis.hpp"
#include "ucflow/assembly.hpp"
#include "ucflow/cases.hpp"
#include "ucflow/solver.hpp"

namespace ucflow {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string case_id = "stokes-convex";
  int k = 1;
  OrderPreset preset = OrderPreset::Equal;
  std::vector<int> meshes{8};
  StabilizationParams params;
  std::optional<NoiseRecipe> noise;
  bool pressure_data = false;
  std::optional<double> nu;

  std::string csv_path;
  std::string report_path;
  std::string mesh_dump_path;
  std::string matrix_dump_path;
  bool timing = false;

  /// Throws ConfigError. `sweep` additionally requires two or more meshes.
  void validate(bool sweep) const;
  /// The case with variant flags applied.
  [[nodiscard]] ProblemCase make_case() const;
};

/// Mesh, spaces, assembled system and its factorization for one
/// (case, mesh, orders, variant). Clean and noisy data share the matrix, so
/// any number of right-hand sides reuse the factorization.
class Discretization {
 public:
  Discretization(ProblemCase problem, int n_div, int k, const StabilizationParams& params);
  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  [[nodiscard]] const ProblemCase& problem() const { return problem_; }
  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] const FeSystem& fe() const { return fe_; }
  [[nodiscard]] const Assembler& assembler() const { return assembler_; }
  [[nodiscard]] const SaddleSystem& system() const { return system_; }
  [[nodiscard]] double setup_seconds() const { return setup_seconds_; }

  /// Solves with clean data or with the given perturbation recipe and
  /// evaluates all error measures. Throws SolverError when the residual
  /// contract is violated.
  MeshResult solve(const std::optional<NoiseRecipe>& noise = std::nullopt, Solution* solution = nullptr) const;

 private:
  ProblemCase problem_;
  Mesh mesh_;
  FeSystem fe_;
  Assembler assembler_;
  SaddleSystem system_;
  std::unique_ptr<SparseLu> lu_;
  double setup_seconds_ = 0.0;
};

/// One solve on config.meshes.front(); writes the optional mesh and matrix dumps.
ConvergenceRecord run_single(const RunConfig& config);
/// Sweep over config.meshes. A mesh-level failure stops the sweep and is
/// recorded in the returned record (complete == false).
ConvergenceRecord run_convergence(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ConvergenceRecord& record);
/// {"config": ..., "results": ...}
nlohmann::json make_report(const RunConfig& config, const ConvergenceRecord& record);

}  // namespace ucflow

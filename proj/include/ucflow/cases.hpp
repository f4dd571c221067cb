#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ucflow/dofmap.hpp"
#include "ucflow/mesh.hpp"

namespace ucflow {

using Vec2 = std::array<double, 2>;
/// Row-major 2x2 gradient: g[2 * i + j] = d_j v_i.
using Mat2 = std::array<double, 4>;

/// Data of one experiment: analytic solution (u, p) of
///   (U.grad)u + (u.grad)U - nu lap u + grad p = f,  div u = 0
/// on a rectangle, the base flow U, and the measurement/target regions.
struct ProblemCase {
  std::string id;
  Box domain;
  double nu = 1.0;

  std::function<Vec2(const Point&)> base_flow;
  std::function<Mat2(const Point&)> base_flow_gradient;

  std::function<Vec2(const Point&)> velocity;
  std::function<Mat2(const Point&)> velocity_gradient;
  std::function<Vec2(const Point&)> velocity_laplacian;
  std::function<double(const Point&)> pressure;
  std::function<Vec2(const Point&)> pressure_gradient;
  std::function<Vec2(const Point&)> source;

  Region measurement;  // omega_M
  Region target;       // B

  bool pressure_augmented = false;
  OrderPreset preset = OrderPreset::Equal;

  /// True when U vanishes identically (skips convective terms).
  bool zero_base_flow = false;
};

enum class Geometry { Convex, NonConvex };

/// Homogeneous Stokes solution u = (20xy^3, 5x^4 - 5y^4),
/// p = 60x^2y - 20y^3 - 5 on the unit square with U = 0, nu = 1, f = 0.
ProblemCase stokes_case(Geometry geometry);

/// Plane Poiseuille flow centred at y = 1/2 with half-width 1/2 and unit
/// centreline amplitude: u = U = (1/4 - (y - 1/2)^2, 0), p = (1/2 - x) 2 nu.
ProblemCase poiseuille_case(double nu);

/// Case ids: stokes-convex, stokes-nonconvex, poiseuille.
ProblemCase case_by_name(const std::string& id, double nu = -1.0);
const std::vector<std::string>& case_names();

/// Strong residual of the momentum operator applied to the exact fields.
Vec2 momentum_residual(const ProblemCase& c, const Point& x);
double divergence(const ProblemCase& c, const Point& x);

struct ConsistencyReport {
  double max_momentum = 0.0;
  double max_divergence = 0.0;
};

/// Evaluates L(u, p) - f and div u at `samples` pseudo-random points.
ConsistencyReport check_consistency(const ProblemCase& c, int samples = 50, std::uint64_t seed = 7);

/// Random velocity perturbation with |du|_{omega_M} = h^{k - theta} |u|_{omega_M}.
struct NoiseRecipe {
  int theta = 0;
  std::uint64_t seed = 1;
};

/// Returns coefficients of the perturbation in the primal velocity space
/// (field-local numbering). Nodes outside omega_M carry zero.
/// Throws std::invalid_argument when theta > k or theta < 0.
Eigen::VectorXd make_noise(const ProblemCase& c, const Mesh& mesh, const FeSystem& fe, const NoiseRecipe& recipe);

}  // namespace ucflow

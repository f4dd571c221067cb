#include "ucflow/cases.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ucflow/integrate.hpp"

namespace ucflow {

ProblemCase stokes_case(Geometry geometry) {
  ProblemCase c;
  c.id = geometry == Geometry::Convex ? "stokes-convex" : "stokes-nonconvex";
  c.domain = Box{};
  c.nu = 1.0;
  c.zero_base_flow = true;
  c.base_flow = [](const Point&) { return Vec2{0.0, 0.0}; };
  c.base_flow_gradient = [](const Point&) { return Mat2{0.0, 0.0, 0.0, 0.0}; };

  c.velocity = [](const Point& p) {
    const double x = p[0], y = p[1];
    return Vec2{20.0 * x * y * y * y, 5.0 * x * x * x * x - 5.0 * y * y * y * y};
  };
  c.velocity_gradient = [](const Point& p) {
    const double x = p[0], y = p[1];
    return Mat2{20.0 * y * y * y, 60.0 * x * y * y, 20.0 * x * x * x, -20.0 * y * y * y};
  };
  c.velocity_laplacian = [](const Point& p) {
    const double x = p[0], y = p[1];
    return Vec2{120.0 * x * y, 60.0 * x * x - 60.0 * y * y};
  };
  c.pressure = [](const Point& p) {
    const double x = p[0], y = p[1];
    return 60.0 * x * x * y - 20.0 * y * y * y - 5.0;
  };
  c.pressure_gradient = [](const Point& p) {
    const double x = p[0], y = p[1];
    return Vec2{120.0 * x * y, 60.0 * x * x - 60.0 * y * y};
  };
  c.source = [](const Point&) { return Vec2{0.0, 0.0}; };

  if (geometry == Geometry::Convex) {
    c.measurement = Region::complement(c.domain, Box{{0.1, 0.25}, {0.9, 1.0}});
    c.target = Region::complement(c.domain, Box{{0.1, 0.95}, {0.9, 1.0}});
  } else {
    c.measurement = Region::rectangle(Box{{0.25, 0.05}, {0.75, 0.5}});
    c.target = Region::rectangle(Box{{0.125, 0.05}, {0.875, 0.95}});
  }
  return c;
}

ProblemCase poiseuille_case(double nu) {
  if (!(nu >= 0.0)) throw std::invalid_argument("poiseuille_case: viscosity must be nonnegative");
  constexpr double amplitude = 1.0;
  constexpr double half_width = 0.5;
  constexpr double centre = 0.5;

  ProblemCase c;
  c.id = "poiseuille";
  c.domain = Box{};
  c.nu = nu;

  auto profile = [](const Point& p) {
    const double s = p[1] - centre;
    return Vec2{amplitude * (half_width * half_width - s * s), 0.0};
  };
  auto profile_gradient = [](const Point& p) {
    const double s = p[1] - centre;
    return Mat2{0.0, -2.0 * amplitude * s, 0.0, 0.0};
  };
  c.base_flow = profile;
  c.base_flow_gradient = profile_gradient;
  c.velocity = profile;
  c.velocity_gradient = profile_gradient;
  c.velocity_laplacian = [](const Point&) { return Vec2{-2.0 * amplitude, 0.0}; };
  const double drop = 2.0 * nu * amplitude;
  c.pressure = [drop](const Point& p) { return (0.5 - p[0]) * drop; };
  c.pressure_gradient = [drop](const Point&) { return Vec2{-drop, 0.0}; };
  c.source = [](const Point&) { return Vec2{0.0, 0.0}; };

  c.measurement = Region::rectangle(Box{{0.0, 0.2}, {0.2, 0.8}});
  c.target = Region::rectangle(Box{{0.2, 0.45}, {0.8, 0.55}});
  return c;
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names = {"stokes-convex", "stokes-nonconvex", "poiseuille"};
  return names;
}

ProblemCase case_by_name(const std::string& id, double nu) {
  if (id == "stokes-convex" || id == "stokes-nonconvex") {
    ProblemCase c = stokes_case(id == "stokes-convex" ? Geometry::Convex : Geometry::NonConvex);
    if (nu >= 0.0 && nu != c.nu) throw std::invalid_argument("case '" + id + "' has fixed viscosity 1");
    return c;
  }
  if (id == "poiseuille") return poiseuille_case(nu >= 0.0 ? nu : 1.0);
  std::ostringstream msg;
  msg << "unknown case '" << id << "'; known cases:";
  for (const auto& n : case_names()) msg << ' ' << n;
  throw std::invalid_argument(msg.str());
}

Vec2 momentum_residual(const ProblemCase& c, const Point& x) {
  const Vec2 u = c.velocity(x);
  const Mat2 gu = c.velocity_gradient(x);
  const Vec2 U = c.base_flow(x);
  const Mat2 gU = c.base_flow_gradient(x);
  const Vec2 lap = c.velocity_laplacian(x);
  const Vec2 gp = c.pressure_gradient(x);
  const Vec2 f = c.source(x);
  Vec2 r{};
  for (int i = 0; i < 2; ++i) {
    const double convect = U[0] * gu[2 * i] + U[1] * gu[2 * i + 1];
    const double reaction = u[0] * gU[2 * i] + u[1] * gU[2 * i + 1];
    r[i] = convect + reaction - c.nu * lap[i] + gp[i] - f[i];
  }
  return r;
}

double divergence(const ProblemCase& c, const Point& x) {
  const Mat2 g = c.velocity_gradient(x);
  return g[0] + g[3];
}

ConsistencyReport check_consistency(const ProblemCase& c, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(c.domain.lo[0], c.domain.hi[0]);
  std::uniform_real_distribution<double> uy(c.domain.lo[1], c.domain.hi[1]);
  ConsistencyReport report;
  for (int s = 0; s < samples; ++s) {
    const Point x{ux(rng), uy(rng)};
    const Vec2 r = momentum_residual(c, x);
    report.max_momentum = std::max({report.max_momentum, std::abs(r[0]), std::abs(r[1])});
    report.max_divergence = std::max(report.max_divergence, std::abs(divergence(c, x)));
  }
  return report;
}

Eigen::VectorXd make_noise(const ProblemCase& c, const Mesh& mesh, const FeSystem& fe, const NoiseRecipe& recipe) {
  const int k = fe.orders().k;
  if (recipe.theta < 0 || recipe.theta > k) {
    throw std::invalid_argument("make_noise: theta must lie in [0, k]");
  }
  const DofMap& dofs = fe.velocity();
  const ScalarNodes& nodes = dofs.nodes();
  std::mt19937_64 rng(recipe.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd noise = Eigen::VectorXd::Zero(dofs.size());
  for (int n = 0; n < nodes.num_nodes(); ++n) {
    // Draw for every node so the stream does not depend on the region.
    const double a = uniform(rng);
    const double b = uniform(rng);
    if (!c.measurement.contains(nodes.coord(n))) continue;
    noise[dofs.local_dof(n, 0)] = a;
    noise[dofs.local_dof(n, 1)] = b;
  }

  const int degree = volume_degree(k);
  const VectorField exact = c.velocity;
  const double signal = std::sqrt(l2_distance_squared(mesh, VectorSource{nullptr, nullptr, &exact}, VectorSource{}, &c.measurement, degree));
  const double raw = std::sqrt(l2_distance_squared(mesh, VectorSource{&dofs, &noise, nullptr}, VectorSource{}, &c.measurement, degree));
  if (raw == 0.0) throw std::runtime_error("make_noise: no velocity node inside the measurement region");
  const double target = std::pow(mesh.h(), k - recipe.theta) * signal;
  noise *= target / raw;
  return noise;
}

}  // namespace ucflow

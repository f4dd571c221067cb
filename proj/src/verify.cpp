#include "ucflow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

#include "ucflow/cases.hpp"
#include "ucflow/quadrature.hpp"

namespace ucflow {

namespace {

constexpr int kVerifyMesh = 4;

std::vector<ProblemCase> assembly_cases() {
  std::vector<ProblemCase> cases;
  cases.push_back(stokes_case(Geometry::Convex));
  cases.push_back(stokes_case(Geometry::NonConvex));
  cases.push_back(poiseuille_case(1e-2));
  cases.push_back(poiseuille_case(0.0));
  return cases;
}

CheckResult finish(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CheckResult check_symmetry(const StabilizationParams& params) {
  const Mesh mesh = build_unit_square_mesh(kVerifyMesh);
  double worst = 0.0;
  for (ProblemCase c : assembly_cases()) {
    for (int k = 1; k <= 3; ++k) {
      for (OrderPreset preset : {OrderPreset::Equal, OrderPreset::Minimal}) {
        const FeSystem fe(mesh, Orders::from_preset(k, preset));
        const Assembler assembler(mesh, fe, c, params);
        for (bool aug : {false, true}) {
          const SaddleSystem s = assembler.assemble_system(aug);
          worst = std::max(worst, s.matrix.max_asymmetry() / s.matrix.max_abs());
        }
      }
    }
  }
  return finish("matrix symmetry", worst, kSymmetryTolerance);
}

CheckResult check_norm_identity(const StabilizationParams& params, int samples, std::uint64_t seed) {
  const Mesh mesh = build_unit_square_mesh(kVerifyMesh);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  double worst = 0.0;
  bool positive = true;
  struct Setup {
    ProblemCase problem;
    bool aug;
  };
  const std::vector<Setup> setups{{stokes_case(Geometry::Convex), false}, {poiseuille_case(1e-2), true}};
  for (const Setup& setup : setups) {
    for (int k = 1; k <= 3; ++k) {
      const FeSystem fe(mesh, Orders::from_preset(k, OrderPreset::Equal));
      const Assembler assembler(mesh, fe, setup.problem, params);
      const SaddleSystem g = assembler.assemble_system(setup.aug);
      CsrMatrix primal = assembler.zero_matrix();
      assembler.assemble_gls(&primal, nullptr);
      assembler.assemble_cip(&primal);
      assembler.assemble_measurement(&primal, nullptr, nullptr);
      if (setup.aug) assembler.assemble_pressure_data(&primal, nullptr);
      CsrMatrix dual = assembler.zero_matrix();
      assembler.assemble_dual_stabilizer(&dual);

      const BlockLayout& b = g.blocks;
      const int split = b.dual_velocity;  // [u | p] before, [z | y | lambda] after
      for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd x(b.size);
        for (int i = 0; i < b.size; ++i) x[i] = uniform(rng);
        Eigen::VectorXd u = Eigen::VectorXd::Zero(b.size);
        u.head(split) = x.head(split);
        const Eigen::VectorXd z = x - u;
        const Eigen::VectorXd test = u - z;
        const double lhs = g.matrix.quadratic_form(x, test);
        // dual holds -S*, so -z^T dual z = S*(Z, Z).
        const double norm2 = primal.quadratic_form(u, u) - dual.quadratic_form(z, z);
        positive = positive && norm2 > 0.0;
        worst = std::max(worst, std::abs(lhs - norm2) / norm2);
      }
    }
  }
  if (!positive) worst = std::numeric_limits<double>::infinity();
  return finish("stability identity G((U,Z),(U,-Z)) = |||(U,Z)|||^2", worst, kIdentityTolerance);
}

CheckResult check_quadrature() {
  double worst = 0.0;
  for (int d = 1; d <= kMaxTriangleDegree; ++d) {
    const QuadratureRule& rule = triangle_rule(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        double q = 0.0;
        for (int i = 0; i < rule.size(); ++i) {
          q += rule.weights[i] * std::pow(rule.points[i][0], a) * std::pow(rule.points[i][1], b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        worst = std::max(worst, std::abs(q - exact) / exact);
      }
    }
  }
  for (int d = 1; d <= 2 * kMaxOrder + 2; ++d) {
    const LineRule rule = edge_rule(d);
    for (int m = 0; m <= d; ++m) {
      double q = 0.0;
      for (int i = 0; i < rule.size(); ++i) q += rule.weights[i] * std::pow(rule.points[i], m);
      worst = std::max(worst, std::abs(q - 1.0 / (m + 1)) * (m + 1));
    }
  }
  return finish("quadrature monomial exactness", worst, kQuadratureTolerance);
}

CheckResult check_cases() {
  std::vector<ProblemCase> cases{stokes_case(Geometry::Convex), stokes_case(Geometry::NonConvex)};
  for (double nu : {1.0, 1e-2, 1e-4, 0.0}) cases.push_back(poiseuille_case(nu));
  double worst = 0.0;
  for (const ProblemCase& c : cases) {
    const ConsistencyReport r = check_consistency(c);
    worst = std::max({worst, r.max_momentum, r.max_divergence});
  }
  return finish("case consistency L(u,p) = f, div u = 0", worst, kConsistencyTolerance);
}

CheckResult check_jump_polynomials(const StabilizationParams& params, std::uint64_t seed) {
  const Mesh mesh = build_unit_square_mesh(kVerifyMesh);
  const ProblemCase c = stokes_case(Geometry::Convex);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const FeSystem fe(mesh, Orders::from_preset(k, OrderPreset::Equal));
    const Assembler assembler(mesh, fe, c, params);
    CsrMatrix jump = assembler.zero_matrix();
    assembler.assemble_gradient_jump(&jump);
    for (int trial = 0; trial < 3; ++trial) {
      // Random vector polynomial of total degree <= k.
      std::vector<std::array<double, 4>> terms;  // a, b, cx, cy
      for (int a = 0; a <= k; ++a) {
        for (int b = 0; a + b <= k; ++b) terms.push_back({double(a), double(b), uniform(rng), uniform(rng)});
      }
      const VectorField field = [terms](const Point& x) {
        std::array<double, 2> v{0.0, 0.0};
        for (const auto& t : terms) {
          const double m = std::pow(x[0], t[0]) * std::pow(x[1], t[1]);
          v[0] += t[2] * m;
          v[1] += t[3] * m;
        }
        return v;
      };
      Eigen::VectorXd global = assembler.zero_vector();
      scatter(fe.velocity(), interpolate(fe.velocity(), field), global);
      const double value =
          jump.multiply(global).lpNorm<Eigen::Infinity>() / (jump.max_abs() * global.lpNorm<Eigen::Infinity>());
      worst = std::max(worst, value);
    }
  }
  return finish("gradient jump vanishes on global polynomials", worst, kJumpTolerance);
}

VerifyReport run_verify(const StabilizationParams& params) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport report;
  report.checks.push_back(check_symmetry(params));
  report.checks.push_back(check_norm_identity(params));
  report.checks.push_back(check_quadrature());
  report.checks.push_back(check_cases());
  report.checks.push_back(check_jump_polynomials(params));
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void print(std::ostream& out, const VerifyReport& report) {
  char buf[256];
  for (const CheckResult& c : report.checks) {
    std::snprintf(buf, sizeof buf, "%s  %-52s  %.3e <= %.1e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                  c.tolerance);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%s  %d checks in %.2f s\n", report.passed() ? "PASS" : "FAIL",
                static_cast<int>(report.checks.size()), report.seconds);
  out << buf;
}

}  // namespace ucflow

#include "ucflow/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ucflow {

namespace {

// Symmetric orbit of barycentric points; `a`/`b` are unused for smaller orbits.
struct Orbit {
  int size;  // 1, 3 or 6
  double a;
  double b;
  double weight;  // per point, relative to unit area
};

struct OrbitTable {
  int degree;
  std::vector<Orbit> orbits;
};

// Dunavant's positive-weight rules. Values with 15 significant digits are
// refined below; the rest are already exact to double precision.
const std::vector<OrbitTable>& dunavant_tables() {
  static const std::vector<OrbitTable> tables = {
      {1, {{1, 0, 0, 1.0}}},
      {2, {{3, 1.0 / 6.0, 0, 1.0 / 3.0}}},
      {4,
       {{3, 0.44594849091596488631832925388305, 0, 0.22338158967801146569500700843312},
        {3, 0.09157621350977074345957146340220, 0, 0.10995174365532186763832632490021}}},
      {5,
       {{1, 0, 0, 0.225},
        {3, 0.47014206410511508977044120951345, 0, 0.13239415278850618073764938783315},
        {3, 0.10128650732345633880098736191512, 0, 0.12593918054482715259568394550018}}},
      {6,
       {{3, 0.24928674517091042129163855310702, 0, 0.11678627572637936602528961138558},
        {3, 0.06308901449150222834033160287082, 0, 0.05084490637020681692093680910686},
        {6, 0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
         0.08285107561837357519355345642044}}},
      {8,
       {{1, 0, 0, 0.14431560767778716825109111048906},
        {3, 0.17056930775176020662229350149146, 0, 0.10321737053471825028179155029212},
        {3, 0.05054722831703097545842355059660, 0, 0.03245849762319808031092592834178},
        {3, 0.45929258829272315602881551449417, 0, 0.09509163426728462479389610438858},
        {6, 0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
         0.02723031417443499426484469007390}}},
      {9,
       {{1, 0, 0, 0.09713579628279609890744676309485},
        {3, 0.48968251919873762778370692483619, 0, 0.03133470022713983234393199080984},
        {3, 0.43708959149293663726993036443535, 0, 0.07782754100477543338465495857972},
        {3, 0.18820353561903273024096128046733, 0, 0.07964773892720910288013526957424},
        {3, 0.04472951339445297061024247196780, 0, 0.02557767565869810438673914467637},
        {6, 0.22196298916076569567510252769319, 0.74119859878449802069007987352342,
         0.04328353937728937728937728937729}}},
      {10,
       {{1, 0, 0, 0.090817990382754},
        {3, 0.485577633383657, 0, 0.036725957756467},
        {3, 0.109481575485037, 0, 0.045321059435528},
        {6, 0.141707219414880, 0.307939838764121, 0.072757916845420},
        {6, 0.025003534762686, 0.246672560639903, 0.028327242531057},
        {6, 0.009540815400299, 0.066803251012200, 0.009421666963733}}},
  };
  return tables;
}

QuadratureRule expand(const std::vector<Orbit>& orbits, int degree) {
  QuadratureRule rule;
  rule.degree = degree;
  auto add = [&rule](double l1, double l2, double w) {
    rule.points.push_back({l1, l2});
    rule.weights.push_back(0.5 * w);
  };
  for (const auto& o : orbits) {
    if (o.size == 1) {
      add(1.0 / 3.0, 1.0 / 3.0, o.weight);
    } else if (o.size == 3) {
      const double c = 1.0 - 2.0 * o.a;
      add(o.a, o.a, o.weight);
      add(o.a, c, o.weight);
      add(c, o.a, o.weight);
    } else {
      const double c = 1.0 - o.a - o.b;
      add(o.a, o.b, o.weight);
      add(o.b, o.a, o.weight);
      add(o.a, c, o.weight);
      add(c, o.a, o.weight);
      add(o.b, c, o.weight);
      add(c, o.b, o.weight);
    }
  }
  return rule;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Integral of x^i y^j over the reference triangle.
double monomial_integral(int i, int j) { return factorial(i) * factorial(j) / factorial(i + j + 2); }

Eigen::VectorXd moment_residual(const std::vector<Orbit>& orbits, int degree) {
  const QuadratureRule rule = expand(orbits, degree);
  Eigen::VectorXd r((degree + 1) * (degree + 2) / 2);
  int row = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int i = 0; i <= d; ++i) {
      const int j = d - i;
      double s = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        s += rule.weights[q] * std::pow(rule.points[q][0], i) * std::pow(rule.points[q][1], j);
      }
      r[row++] = (s - monomial_integral(i, j)) / monomial_integral(i, j);
    }
  }
  return r;
}

std::vector<double*> free_parameters(std::vector<Orbit>& orbits) {
  std::vector<double*> params;
  for (auto& o : orbits) {
    if (o.size >= 3) params.push_back(&o.a);
    if (o.size == 6) params.push_back(&o.b);
    params.push_back(&o.weight);
  }
  return params;
}

// Gauss-Newton on the moment equations, starting from the tabulated values.
void refine(std::vector<Orbit>& orbits, int degree) {
  const auto params = free_parameters(orbits);
  const int np = static_cast<int>(params.size());
  for (int iter = 0; iter < 8; ++iter) {
    const Eigen::VectorXd r = moment_residual(orbits, degree);
    if (r.lpNorm<Eigen::Infinity>() < 1e-15) break;
    Eigen::MatrixXd jac(r.size(), np);
    for (int p = 0; p < np; ++p) {
      const double saved = *params[p];
      const double step = 1e-7 * std::max(1.0, std::abs(saved));
      *params[p] = saved + step;
      const Eigen::VectorXd rp = moment_residual(orbits, degree);
      *params[p] = saved - step;
      const Eigen::VectorXd rm = moment_residual(orbits, degree);
      *params[p] = saved;
      jac.col(p) = (rp - rm) / (2.0 * step);
    }
    const Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(-r);
    for (int p = 0; p < np; ++p) *params[p] += delta[p];
  }
}

QuadratureRule build_triangle_rule(int degree) {
  int table_degree = degree;
  if (degree == 3) table_degree = 4;
  if (degree == 7) table_degree = 8;
  for (const auto& table : dunavant_tables()) {
    if (table.degree != table_degree) continue;
    auto orbits = table.orbits;
    refine(orbits, table.degree);
    const Eigen::VectorXd r = moment_residual(orbits, table.degree);
    if (r.lpNorm<Eigen::Infinity>() > 1e-13) {
      throw std::logic_error("triangle_rule: refinement failed for degree " + std::to_string(degree));
    }
    return expand(orbits, table.degree);
  }
  throw std::logic_error("triangle_rule: no table for degree " + std::to_string(degree));
}

}  // namespace

const QuadratureRule& triangle_rule(int degree) {
  if (degree < 1 || degree > kMaxTriangleDegree) {
    throw std::invalid_argument("triangle_rule: degree must be in [1, 10], got " + std::to_string(degree));
  }
  static const std::array<QuadratureRule, kMaxTriangleDegree> rules = [] {
    std::array<QuadratureRule, kMaxTriangleDegree> r;
    for (int d = 1; d <= kMaxTriangleDegree; ++d) r[d - 1] = build_triangle_rule(d);
    return r;
  }();
  return rules[degree - 1];
}

LineRule edge_rule(int degree) {
  if (degree < 1) throw std::invalid_argument("edge_rule: degree must be >= 1");
  const int n = (degree + 2) / 2;
  LineRule rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1, 1] to [0, 1], smallest node first.
    rule.points[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace ucflow

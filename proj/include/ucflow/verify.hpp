#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ucflow/assembly.hpp"

namespace ucflow {

struct CheckResult {
  std::string name;
  /// Worst observed value of the checked quantity.
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  [[nodiscard]] bool passed() const;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kQuadratureTolerance = 1e-12;
inline constexpr double kConsistencyTolerance = 1e-10;
inline constexpr double kJumpTolerance = 1e-11;

/// Relative asymmetry max|G_ij - G_ji| / max|G| over cases, orders k = 1..3,
/// both order presets and both pressure variants on n_div = 4.
CheckResult check_symmetry(const StabilizationParams& params);
/// |G((U,Z),(U,-Z)) - |||(U,Z)|||^2| / |||(U,Z)|||^2 over `samples` random
/// vectors per case and order, n_div = 4. Also requires |||(U,Z)||| > 0.
CheckResult check_norm_identity(const StabilizationParams& params, int samples = 20, std::uint64_t seed = 2024);
/// Largest relative error of triangle and edge rules on monomials up to
/// their degree.
CheckResult check_quadrature();
/// Largest |L(u,p) - f| and |div u| over all cases and viscosities.
CheckResult check_cases();
/// |J d|_inf / (max|J| |d|_inf) for the assembled gradient-jump operator J
/// and interpolants d of random global polynomials of degree <= k.
CheckResult check_jump_polynomials(const StabilizationParams& params, std::uint64_t seed = 99);

VerifyReport run_verify(const StabilizationParams& params = {});
void print(std::ostream& out, const VerifyReport& report);

}  // namespace ucflow

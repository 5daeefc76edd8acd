#pragma once

#include <string>
#include <vector>

#include "vortexlab/trajectory.hpp"

namespace vortexlab {

/// Scalar composition function beta for the renormalization diagnostics.
/// The flags declare the analytic class the diagnostics rely on: bounded_c1
/// marks bounded functions with bounded continuous slope (the class the
/// weak-limit transport identity is tested in), convex marks the class with
/// the viscous one-sided decay of int beta(omega).
struct BetaFunction {
  enum class Kind { arctan_soft, bounded_rational, smooth_clip, power_convex };

  Kind kind = Kind::arctan_soft;
  double param = 1.0;  // clip level for smooth_clip, exponent for power_convex
  std::string name;
  bool bounded_c1 = false;
  bool convex = false;

  double operator()(double s) const;
  double slope(double s) const;

  static BetaFunction arctan_soft();                // atan(s)
  static BetaFunction bounded_rational();           // s / (1 + s^2)
  static BetaFunction smooth_clip(double level);    // M tanh(s / M)
  static BetaFunction power_convex(double exponent); // |s|^r, r >= 1
};

/// Centered-difference audit of the declared flags on [-range, range]:
/// bounded_c1 demands |beta| and |beta'| stay bounded by a constant
/// independent of range growth, convex demands nonnegative second
/// differences (small negative rounding tolerated). Returns false when a
/// declared flag fails its numeric check.
bool verify_beta_flags(const BetaFunction& beta, double range);

/// int beta(omega(x)) dx over the torus (compensated sum).
double beta_integral(const ScalarField& omega, const BetaFunction& beta);

/// Series drift[k] = int beta(omega_k) - int beta(omega_0); drift[0] == 0
/// by construction. The vanishing-viscosity transport identity makes this
/// series collapse for bounded-C1 beta; for convex beta under positive
/// viscosity it is the (signed) cumulative dissipation.
std::vector<double> renorm_drift(const Trajectory& traj,
                                 const BetaFunction& beta);

/// Largest uphill move max_{j<k} (I_k - I_j) of I_k = int beta(omega_k)
/// along the run, zero for a perfectly non-increasing series. Requires the
/// convex flag; for other beta the sign law does not apply and the call is
/// rejected.
double dissipation_rise(const Trajectory& traj, const BetaFunction& beta);

/// Lebesgue measure of {x : |omega(x)| > lambda} (strict inequality),
/// cell-counting quadrature.
double distribution_function(const ScalarField& omega, double lambda);

/// Fixed spatial test function with a stable name for report columns.
struct TestFunction {
  std::string name;
  ScalarField field;
};

/// Smooth localized bank: five tensor-bump placements times two widths plus
/// the constant function (whose pairing with vorticity is the conserved
/// total circulation).
std::vector<TestFunction> default_test_bank(const Grid& grid);

/// Default beta bank scaled to the datum: the two bounded-C1 shapes, smooth
/// clips at half and full omega_scale, and the convex quadratic.
std::vector<BetaFunction> default_beta_bank(double omega_scale);

/// Pairings <omega_k, test_j> for every snapshot and test, plus the
/// trapezoid time integral per test.
struct PairingTable {
  std::vector<std::string> test_names;
  std::vector<double> time;
  std::vector<std::vector<double>> at_time;  // [snapshot][test]
  std::vector<double> integrated;            // [test]
};

PairingTable weak_star_pairings(const Trajectory& traj,
                                const std::vector<TestFunction>& tests);

/// Snapshot-wise ||a_k - b_k||_p for two runs on the same mesh.
std::vector<double> lp_distance_series(const Trajectory& a,
                                       const Trajectory& b, double p);

}  // namespace vortexlab

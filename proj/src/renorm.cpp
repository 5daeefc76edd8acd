#include "vortexlab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vortexlab/errors.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/sources.hpp"

namespace vortexlab {

double BetaFunction::operator()(double s) const {
  switch (kind) {
    case Kind::arctan_soft:
      return std::atan(s);
    case Kind::bounded_rational:
      return s / (1.0 + s * s);
    case Kind::smooth_clip:
      return param * std::tanh(s / param);
    case Kind::power_convex:
      return std::pow(std::fabs(s), param);
  }
  return 0.0;
}

double BetaFunction::slope(double s) const {
  switch (kind) {
    case Kind::arctan_soft:
      return 1.0 / (1.0 + s * s);
    case Kind::bounded_rational: {
      const double d = 1.0 + s * s;
      return (1.0 - s * s) / (d * d);
    }
    case Kind::smooth_clip: {
      const double c = std::cosh(s / param);
      return 1.0 / (c * c);
    }
    case Kind::power_convex:
      if (s == 0.0) return 0.0;
      return param * std::pow(std::fabs(s), param - 1.0) * (s > 0 ? 1.0 : -1.0);
  }
  return 0.0;
}

BetaFunction BetaFunction::arctan_soft() {
  BetaFunction b;
  b.kind = Kind::arctan_soft;
  b.name = "arctan_soft";
  b.bounded_c1 = true;
  return b;
}

BetaFunction BetaFunction::bounded_rational() {
  BetaFunction b;
  b.kind = Kind::bounded_rational;
  b.name = "bounded_rational";
  b.bounded_c1 = true;
  return b;
}

BetaFunction BetaFunction::smooth_clip(double level) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw ValidationError("smooth_clip: level must be positive");
  }
  BetaFunction b;
  b.kind = Kind::smooth_clip;
  b.param = level;
  b.name = "smooth_clip_" + std::to_string(level);
  b.bounded_c1 = true;
  return b;
}

BetaFunction BetaFunction::power_convex(double exponent) {
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw ValidationError("power_convex: exponent must be >= 1");
  }
  BetaFunction b;
  b.kind = Kind::power_convex;
  b.param = exponent;
  b.name = "power_convex_" + std::to_string(exponent);
  b.convex = true;
  return b;
}

bool verify_beta_flags(const BetaFunction& beta, double range) {
  if (!(range > 0.0)) {
    throw ValidationError("verify_beta_flags: range must be positive");
  }
  const int samples = 4001;
  const double hs = 2.0 * range / (samples - 1);
  if (beta.bounded_c1) {
    // Bounded value and slope over the sampled window, and the analytic
    // slope must match centered differences.
    const double cap = 10.0 * (1.0 + beta.param);
    for (int i = 0; i < samples; ++i) {
      const double s = -range + hs * i;
      if (std::fabs(beta(s)) > cap || std::fabs(beta.slope(s)) > cap) {
        return false;
      }
      const double fd = (beta(s + hs) - beta(s - hs)) / (2.0 * hs);
      if (std::fabs(fd - beta.slope(s)) > 1e-3 * (1.0 + std::fabs(fd))) {
        return false;
      }
    }
  }
  if (beta.convex) {
    for (int i = 1; i + 1 < samples; ++i) {
      const double s = -range + hs * i;
      const double second = beta(s - hs) - 2.0 * beta(s) + beta(s + hs);
      if (second < -1e-10 * std::max(1.0, std::fabs(beta(s)))) return false;
    }
  }
  return true;
}

double beta_integral(const ScalarField& omega, const BetaFunction& beta) {
  ScalarField composed(omega.grid, omega.time);
  for (std::size_t i = 0; i < omega.values.size(); ++i) {
    composed.values[i] = beta(omega.values[i]);
  }
  return integrate(composed);
}

std::vector<double> renorm_drift(const Trajectory& traj,
                                 const BetaFunction& beta) {
  if (traj.snapshots.empty()) {
    throw ValidationError("renorm_drift: empty trajectory");
  }
  std::vector<double> drift;
  drift.reserve(traj.snapshots.size());
  const double base = beta_integral(traj.snapshots.front(), beta);
  for (const ScalarField& w : traj.snapshots) {
    drift.push_back(beta_integral(w, beta) - base);
  }
  drift[0] = 0.0;
  return drift;
}

double dissipation_rise(const Trajectory& traj, const BetaFunction& beta) {
  if (!beta.convex) {
    throw ValidationError(
        "dissipation_rise: the decay law needs a convex beta (got " +
        beta.name + ")");
  }
  const std::vector<double> drift = renorm_drift(traj, beta);
  double rise = 0.0;
  double running_min = 0.0;
  for (double d : drift) {
    rise = std::max(rise, d - running_min);
    running_min = std::min(running_min, d);
  }
  return rise;
}

double distribution_function(const ScalarField& omega, double lambda) {
  if (std::isnan(lambda) || lambda < 0.0) {
    throw ValidationError("distribution_function: lambda must be >= 0");
  }
  const double h = omega.grid.h();
  std::size_t count = 0;
  for (double v : omega.values) {
    if (std::fabs(v) > lambda) ++count;
  }
  return h * h * static_cast<double>(count);
}

std::vector<TestFunction> default_test_bank(const Grid& grid) {
  const double L = grid.side_length;
  const double cx = L / 2.0;
  const double cy = L / 2.0;
  const double off = L / 8.0;
  const double wide = L / 12.0;
  const double narrow = L / 24.0;

  const struct {
    const char* tag;
    double x, y;
  } centers[] = {{"center", cx, cy},
                 {"east", cx + off, cy},
                 {"west", cx - off, cy},
                 {"north", cx, cy + off},
                 {"south", cx, cy - off}};

  std::vector<TestFunction> bank;
  bank.reserve(11);
  for (const auto& c : centers) {
    bank.push_back({std::string("bump_") + c.tag + "_wide",
                    tensor_bump(grid, c.x, c.y, wide)});
    bank.push_back({std::string("bump_") + c.tag + "_narrow",
                    tensor_bump(grid, c.x, c.y, narrow)});
  }
  ScalarField ones(grid);
  std::fill(ones.values.begin(), ones.values.end(), 1.0);
  bank.push_back({"const_one", std::move(ones)});
  return bank;
}

std::vector<BetaFunction> default_beta_bank(double omega_scale) {
  if (!(omega_scale > 0.0) || !std::isfinite(omega_scale)) {
    throw ValidationError("default_beta_bank: omega_scale must be positive");
  }
  std::vector<BetaFunction> bank;
  bank.push_back(BetaFunction::arctan_soft());
  bank.push_back(BetaFunction::bounded_rational());
  bank.push_back(BetaFunction::smooth_clip(0.5 * omega_scale));
  bank.push_back(BetaFunction::smooth_clip(omega_scale));
  bank.push_back(BetaFunction::power_convex(2.0));
  return bank;
}

PairingTable weak_star_pairings(const Trajectory& traj,
                                const std::vector<TestFunction>& tests) {
  if (traj.snapshots.empty()) {
    throw ValidationError("weak_star_pairings: empty trajectory");
  }
  if (tests.empty()) {
    throw ValidationError("weak_star_pairings: empty test bank");
  }
  for (const TestFunction& t : tests) {
    require_same_grid(t.field.grid, traj.grid, "weak_star_pairings");
  }

  PairingTable table;
  table.test_names.reserve(tests.size());
  for (const TestFunction& t : tests) table.test_names.push_back(t.name);

  // Trapezoid weights from the stored times themselves, so thinned runs
  // (non-uniform final gap) integrate correctly.
  const std::size_t K = traj.steps();
  const auto weight = [&](std::size_t k) {
    if (K == 0) return 0.0;
    const double left = k == 0 ? 0.0
                               : traj.snapshots[k].time - traj.snapshots[k - 1].time;
    const double right = k == K ? 0.0
                                : traj.snapshots[k + 1].time - traj.snapshots[k].time;
    return 0.5 * (left + right);
  };
  table.time.reserve(K + 1);
  table.at_time.reserve(K + 1);
  table.integrated.assign(tests.size(), 0.0);
  for (std::size_t k = 0; k <= K; ++k) {
    const double w_k = weight(k);
    table.time.push_back(traj.snapshots[k].time);
    std::vector<double> row;
    row.reserve(tests.size());
    for (std::size_t j = 0; j < tests.size(); ++j) {
      const double v = inner_product(traj.snapshots[k], tests[j].field);
      row.push_back(v);
      table.integrated[j] += w_k * v;
    }
    table.at_time.push_back(std::move(row));
  }
  return table;
}

std::vector<double> lp_distance_series(const Trajectory& a,
                                       const Trajectory& b, double p) {
  require_same_grid(a.grid, b.grid, "lp_distance_series");
  if (a.snapshots.size() != b.snapshots.size() || a.snapshots.empty()) {
    throw ValidationError("lp_distance_series: runs must share the mesh");
  }
  const double slack = 1e-9 * std::max(1.0, std::fabs(a.t_final()));
  std::vector<double> out;
  out.reserve(a.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    if (std::fabs(a.snapshots[k].time - b.snapshots[k].time) > slack) {
      throw ValidationError("lp_distance_series: time mesh mismatch at index " +
                            std::to_string(k));
    }
    ScalarField diff(a.grid, a.snapshots[k].time);
    for (std::size_t i = 0; i < diff.values.size(); ++i) {
      diff.values[i] = a.snapshots[k].values[i] - b.snapshots[k].values[i];
    }
    out.push_back(lp_norm(diff, p));
  }
  return out;
}

}  // namespace vortexlab

#include "vortexlab/ns_solver.hpp"

#include <cmath>
#include <string>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/log.hpp"
#include "vortexlab/spectral.hpp"
#include "vortexlab/stepper.hpp"

namespace vortexlab {

ScalarField nonlinear_term(const ScalarField& omega) {
  Spectrum what = spectral::forward(omega);
  const VectorField u = biot_savart::velocity_from_spectrum(what);
  Spectrum sx = what;
  spectral::derivative_x_in_place(sx);
  spectral::derivative_y_in_place(what);
  const ScalarField zx = spectral::inverse(sx);
  const ScalarField zy = spectral::inverse(what);
  ScalarField prod(omega.grid, omega.time);
  for (std::size_t k = 0; k < prod.values.size(); ++k) {
    prod.values[k] = -(u.x[k] * zx.values[k] + u.y[k] * zy.values[k]);
  }
  Spectrum out = spectral::forward(prod);
  spectral::dealias_in_place(out);
  return spectral::inverse(out);
}

namespace {

StageVelocityFn self_induced_velocity() {
  return [](double, const Spectrum& stage) {
    return biot_savart::velocity_from_spectrum(stage);
  };
}

}  // namespace

ScalarField ns_step(const ScalarField& omega, double dt, double nu,
                    double cfl_fraction, std::size_t step_index) {
  Ifrk4Engine engine(omega.grid, nu, dt, -1.0);
  const VectorField u0 =
      biot_savart::velocity_from_spectrum(spectral::forward(omega));
  check_cfl(u0, dt, cfl_fraction, step_index);
  return engine.step(omega, omega.time, self_induced_velocity());
}

std::size_t step_count(double dt, double t_final) {
  if (!(dt > 0.0) || !(t_final > 0.0)) {
    throw ValidationError("step_count: dt and t_final must be positive");
  }
  const double ratio = t_final / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0 || std::fabs(ratio - static_cast<double>(steps)) > 1e-6) {
    throw ValidationError("t_final must be an integer multiple of dt (got "
                          "t_final/dt = " + std::to_string(ratio) + ")");
  }
  return steps;
}

Trajectory run_forward(const ScalarField& omega0, const SolverConfig& config) {
  const std::size_t steps = step_count(config.dt, config.t_final);
  if (std::isnan(config.nu) || config.nu < 0.0) {
    throw ValidationError("run_forward: nu must be >= 0");
  }
  require_finite(omega0.values, "run_forward: omega0");

  // Project the datum into the retained band once; every later state stays
  // there because the slopes are dealiased.
  Spectrum w0_hat = spectral::forward(omega0);
  spectral::dealias_in_place(w0_hat);
  ScalarField w = spectral::inverse(w0_hat);
  w.time = omega0.time;

  Ifrk4Engine engine(omega0.grid, config.nu, config.dt, -1.0);
  const StageVelocityFn vel = self_induced_velocity();

  Trajectory traj;
  traj.grid = omega0.grid;
  traj.role = "ns";
  traj.nu = config.nu;
  traj.dt = config.dt;
  traj.snapshots.reserve(steps + 1);
  traj.snapshots.push_back(w);

  for (std::size_t k = 0; k < steps; ++k) {
    const VectorField u =
        biot_savart::velocity_from_spectrum(spectral::forward(w));
    check_cfl(u, config.dt, config.cfl_fraction, k);
    ScalarField next = engine.step(w, w.time, vel);
    for (double v : next.values) {
      if (!std::isfinite(v)) {
        throw NumericalError("run_forward: non-finite state after step " +
                             std::to_string(k));
      }
    }
    w = std::move(next);
    traj.snapshots.push_back(w);
  }

  compute_diagnostics(traj, config.diag_p);
  log::info("run_forward: nu = " + std::to_string(config.nu) + ", " +
            std::to_string(steps) + " steps done");
  return traj;
}

}  // namespace vortexlab

#include "vortexlab/dual_solver.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/log.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/ns_solver.hpp"
#include "vortexlab/spectral.hpp"
#include "vortexlab/stepper.hpp"

namespace vortexlab {

namespace {

void require_nu(double nu, const char* what) {
  if (std::isnan(nu) || nu < 0.0) {
    throw ValidationError(std::string(what) + ": nu must be >= 0");
  }
}

void require_q(double q, const char* what) {
  if (std::isnan(q) || q < 2.0) {
    throw ValidationError(std::string(what) +
                          ": dual exponent q must be >= 2, got " +
                          std::to_string(q));
  }
}

void abort_on_nonfinite(const ScalarField& w, const char* what, std::size_t k) {
  for (double v : w.values) {
    if (!std::isfinite(v)) {
      throw NumericalError(std::string(what) + ": non-finite state after step " +
                           std::to_string(k));
    }
  }
}

ScalarField project_dealias(const ScalarField& f) {
  Spectrum fh = spectral::forward(f);
  spectral::dealias_in_place(fh);
  ScalarField out = spectral::inverse(fh);
  out.time = f.time;
  return out;
}

}  // namespace

Trajectory transport_forward(const ScalarField& w0, const VelocitySource& vel,
                             double dt, double t_final, double nu,
                             double cfl_fraction) {
  require_same_grid(w0.grid, vel.grid(), "transport_forward");
  require_nu(nu, "transport_forward");
  require_finite(w0.values, "transport_forward: w0");
  const std::size_t steps = step_count(dt, t_final);
  const double t0 = w0.time;

  Ifrk4Engine engine(w0.grid, nu, dt, -1.0);
  const StageVelocityFn stage_vel = [&vel](double t, const Spectrum&) {
    return vel.at(t);
  };

  // Same entry projection as the self-induced run, so both evolutions live
  // in the retained band from the first step on.
  ScalarField w = project_dealias(w0);

  Trajectory traj;
  traj.grid = w0.grid;
  traj.role = "transport";
  traj.nu = nu;
  traj.dt = dt;
  traj.snapshots.reserve(steps + 1);
  traj.snapshots.push_back(w);

  for (std::size_t k = 0; k < steps; ++k) {
    check_cfl(vel.at(w.time), dt, cfl_fraction, k);
    ScalarField next = engine.step(w, w.time, stage_vel);
    abort_on_nonfinite(next, "transport_forward", k);
    w = std::move(next);
    traj.snapshots.push_back(w);
  }

  compute_diagnostics(traj, 2.0);
  log::info("transport_forward: " + std::to_string(steps) + " steps, nu = " +
            std::to_string(nu));
  return traj;
}

Trajectory dual_backward(const DualConfig& config, const VelocitySource& vel,
                         const SpaceTimeSource& chi, const ScalarField* phi_T) {
  require_q(config.q, "dual_backward");
  require_nu(config.nu, "dual_backward");
  require_same_grid(vel.grid(), chi.grid(), "dual_backward");
  const Grid& grid = chi.grid();
  const double dt = config.dt;
  const double T = config.t_final;
  const std::size_t steps = step_count(dt, T - config.t0);

  ScalarField psi = phi_T ? *phi_T : ScalarField(grid);
  if (phi_T) {
    require_same_grid(phi_T->grid, grid, "dual_backward: phi_T");
    require_finite(phi_T->values, "dual_backward: phi_T");
  }

  // Reversed clock s = T - t turns the backward problem into a forward
  // advection-diffusion run with the advection sign flipped (the divergence
  // form collapses to u.grad by incompressibility).
  Ifrk4Engine engine(grid, config.nu, dt, +1.0);
  const StageVelocityFn stage_vel = [&](double s, const Spectrum&) {
    return vel.at(T - s);
  };
  const StageSourceFn source = [&](double s) { return chi.at(T - s); };

  std::vector<ScalarField> reversed;
  reversed.reserve(steps + 1);
  psi.time = 0.0;
  reversed.push_back(psi);
  for (std::size_t k = 0; k < steps; ++k) {
    const double s_k = static_cast<double>(k) * dt;
    check_cfl(vel.at(T - s_k), dt, config.cfl_fraction, k);
    ScalarField next = engine.step(psi, s_k, stage_vel, &source);
    abort_on_nonfinite(next, "dual_backward", k);
    psi = std::move(next);
    reversed.push_back(psi);
  }

  Trajectory traj;
  traj.grid = grid;
  traj.role = "dual";
  traj.nu = config.nu;
  traj.dt = dt;
  traj.snapshots.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    ScalarField f = std::move(reversed[steps - k]);
    f.time = config.t0 + static_cast<double>(k) * dt;
    traj.snapshots.push_back(std::move(f));
  }
  compute_diagnostics(traj, config.diag_p);
  log::info("dual_backward: " + std::to_string(steps) + " steps, source " +
            chi.name());
  return traj;
}

ForwardStepperSpec ForwardStepperSpec::ns_replay(const Trajectory* traj) {
  ForwardStepperSpec spec;
  spec.kind = Kind::ns_replay;
  spec.trajectory = traj;
  return spec;
}

ForwardStepperSpec ForwardStepperSpec::frozen(const VelocitySource* vel) {
  ForwardStepperSpec spec;
  spec.kind = Kind::frozen_velocity;
  spec.velocity = vel;
  return spec;
}

Trajectory dual_backward_adjoint(const DualConfig& config,
                                 const ForwardStepperSpec& stepper,
                                 const SpaceTimeSource& chi,
                                 const ScalarField* phi_T) {
  require_q(config.q, "dual_backward_adjoint");
  require_nu(config.nu, "dual_backward_adjoint");
  const Grid& grid = chi.grid();
  const std::size_t steps = step_count(config.dt, config.t_final - config.t0);

  const Trajectory* traj = nullptr;
  const VelocitySource* vel = nullptr;
  if (stepper.kind == ForwardStepperSpec::Kind::ns_replay) {
    traj = stepper.trajectory;
    if (!traj) {
      throw ValidationError("dual_backward_adjoint: replay needs a trajectory");
    }
    require_same_grid(traj->grid, grid, "dual_backward_adjoint");
    if (!traj->is_stride_one()) {
      throw ValidationError(
          "dual_backward_adjoint: replay needs stride-1 snapshots");
    }
    if (traj->steps() != steps ||
        std::fabs(traj->dt - config.dt) > 1e-12 * std::max(1.0, config.dt) ||
        std::fabs(traj->t0() - config.t0) > 1e-9) {
      throw ValidationError(
          "dual_backward_adjoint: trajectory mesh does not match the config");
    }
    if (std::fabs(traj->nu - config.nu) > 1e-14 * std::max(1.0, config.nu)) {
      throw ValidationError("dual_backward_adjoint: nu mismatch");
    }
  } else {
    vel = stepper.velocity;
    if (!vel) {
      throw ValidationError(
          "dual_backward_adjoint: frozen mode needs a velocity source");
    }
    require_same_grid(vel->grid(), grid, "dual_backward_adjoint");
  }

  // Replay uses the trajectory's own nu/dt so the recomputed stage
  // velocities reproduce the forward arithmetic bit-for-bit.
  const double dt = traj ? traj->dt : config.dt;
  const double nu = traj ? traj->nu : config.nu;
  Ifrk4Engine engine(grid, nu, dt, -1.0);
  const StageVelocityFn self_vel = [](double, const Spectrum& stage) {
    return biot_savart::velocity_from_spectrum(stage);
  };

  const auto stages_for = [&](std::size_t k, double t_k) {
    StageVelocities sv{VectorField(grid), VectorField(grid), VectorField(grid),
                       VectorField(grid)};
    if (traj) {
      (void)engine.step(traj->snapshots[k], t_k, self_vel, nullptr, &sv);
    } else {
      sv.a = vel->at(t_k);
      sv.b = vel->at(t_k + dt / 2.0);
      sv.c = sv.b;
      sv.d = vel->at(t_k + dt);
    }
    return sv;
  };

  ScalarField phi = phi_T ? *phi_T : ScalarField(grid);
  if (phi_T) {
    require_same_grid(phi_T->grid, grid, "dual_backward_adjoint: phi_T");
    require_finite(phi_T->values, "dual_backward_adjoint: phi_T");
  }
  phi.time = config.t_final;
  {
    const ScalarField chi_T = chi.at(config.t_final);
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
      phi.values[i] += 0.5 * dt * chi_T.values[i];
    }
  }

  std::vector<ScalarField> snaps(steps + 1);
  snaps[steps] = phi;
  for (std::size_t k = steps; k-- > 0;) {
    const double t_k = traj ? traj->snapshots[k].time
                            : config.t0 + static_cast<double>(k) * dt;
    const StageVelocities sv = stages_for(k, t_k);
    ScalarField prev = engine.step_transpose(phi, sv);
    const double c_k = (k == 0) ? 0.5 : 1.0;
    const ScalarField chi_k = chi.at(t_k);
    for (std::size_t i = 0; i < prev.values.size(); ++i) {
      prev.values[i] += c_k * dt * chi_k.values[i];
    }
    prev.time = t_k;
    abort_on_nonfinite(prev, "dual_backward_adjoint", k);
    phi = std::move(prev);
    snaps[k] = phi;
  }

  Trajectory out;
  out.grid = grid;
  out.role = "dual";
  out.nu = nu;
  out.dt = dt;
  out.snapshots = std::move(snaps);
  compute_diagnostics(out, config.diag_p);
  log::info("dual_backward_adjoint: " + std::to_string(steps) +
            " steps, source " + chi.name() +
            (traj ? ", replayed trajectory" : ", frozen velocity"));
  return out;
}

DualityResult duality_residual(const Trajectory& forward,
                               const Trajectory& dual,
                               const SpaceTimeSource& chi,
                               const ScalarField* phi_T) {
  require_same_grid(forward.grid, dual.grid, "duality_residual");
  require_same_grid(forward.grid, chi.grid(), "duality_residual");
  if (forward.snapshots.size() < 2 ||
      forward.snapshots.size() != dual.snapshots.size()) {
    throw ValidationError("duality_residual: trajectories must share the mesh");
  }
  const std::size_t K = forward.steps();
  const double dt = forward.dt;
  if (std::fabs(dual.dt - dt) > 1e-12 * std::max(1.0, dt)) {
    throw ValidationError("duality_residual: dt mismatch");
  }
  const double slack = 1e-9 * std::max(1.0, std::fabs(forward.t_final()));
  for (std::size_t k = 0; k <= K; ++k) {
    if (std::fabs(forward.snapshots[k].time - dual.snapshots[k].time) > slack) {
      throw ValidationError("duality_residual: time mesh mismatch at index " +
                            std::to_string(k));
    }
  }

  DualityResult res;
  double scale_pairs = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    const double c_k = (k == 0 || k == K) ? 0.5 : 1.0;
    const double t_k = forward.snapshots[k].time;
    const ScalarField chi_k = chi.at(t_k);
    res.pairing += c_k * dt * inner_product(chi_k, forward.snapshots[k]);
    scale_pairs += c_k * dt * lp_norm(chi_k, 2.0) *
                   lp_norm(forward.snapshots[k], 2.0);
  }
  const double b0 = inner_product(dual.front(), forward.front());
  const double bT = phi_T ? inner_product(*phi_T, forward.back()) : 0.0;
  res.boundary = b0 - bT;
  res.residual = std::fabs(res.pairing - res.boundary);
  res.scale = scale_pairs +
              lp_norm(dual.front(), 2.0) * lp_norm(forward.front(), 2.0) +
              (phi_T ? lp_norm(*phi_T, 2.0) * lp_norm(forward.back(), 2.0)
                     : 0.0);
  return res;
}

namespace {

double env_ratio(double value, double envelope) {
  if (envelope <= 0.0) {
    return value <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return value / envelope;
}

}  // namespace

EnvelopeReport dual_envelopes(const Trajectory& phi, const SpaceTimeSource& chi,
                              const ScalarField* phi_T, double q) {
  require_q(q, "dual_envelopes");
  require_same_grid(phi.grid, chi.grid(), "dual_envelopes");
  if (phi.snapshots.size() < 2) {
    throw ValidationError("dual_envelopes: trajectory too short");
  }
  const std::size_t K = phi.steps();
  const double dt = phi.dt;
  const double T = phi.t_final();

  // Backward-marching majorant of ||phi_T||_r + int_t^T ||chi||_r ds on the
  // run's own mesh: the terminal node carries the trapezoid half weight the
  // dual recursion uses, and each step adds dt times the largest stage-time
  // source norm so the bound dominates every stage the step actually saw.
  double env2 = (phi_T ? lp_norm(*phi_T, 2.0) : 0.0) +
                0.5 * dt * chi.lp_norm_at(T, 2.0);
  double envq = (phi_T ? lp_norm(*phi_T, q) : 0.0) +
                0.5 * dt * chi.lp_norm_at(T, q);

  EnvelopeReport rep;
  rep.max_ratio_l2 = env_ratio(lp_norm(phi.snapshots[K], 2.0), env2);
  rep.max_ratio_lq = env_ratio(lp_norm(phi.snapshots[K], q), envq);

  const double mass_T = integrate(phi.snapshots[K]);
  for (std::size_t k = K; k-- > 0;) {
    const double t_k = phi.snapshots[k].time;
    const double t_mid = t_k + dt / 2.0;
    const double t_next = phi.snapshots[k + 1].time;
    env2 += dt * std::max({chi.lp_norm_at(t_k, 2.0), chi.lp_norm_at(t_mid, 2.0),
                           chi.lp_norm_at(t_next, 2.0)});
    envq += dt * std::max({chi.lp_norm_at(t_k, q), chi.lp_norm_at(t_mid, q),
                           chi.lp_norm_at(t_next, q)});
    rep.max_ratio_l2 =
        std::max(rep.max_ratio_l2, env_ratio(lp_norm(phi.snapshots[k], 2.0), env2));
    rep.max_ratio_lq =
        std::max(rep.max_ratio_lq, env_ratio(lp_norm(phi.snapshots[k], q), envq));
    rep.mass_drift = std::max(rep.mass_drift,
                              std::fabs(integrate(phi.snapshots[k]) - mass_T));
  }
  return rep;
}

}  // namespace vortexlab

#pragma once

#include "vortexlab/trajectory.hpp"

namespace vortexlab {

/// Settings for a single viscous vorticity run.
struct SolverConfig {
  double nu = 0.0;           // >= 0
  double dt = 0.0;           // > 0; t_final must be an integer multiple
  double t_final = 1.0;
  double cfl_fraction = 0.5; // re-checked every step against max|u|
  double diag_p = 1.5;       // extra Lp tracked in the diagnostics series
};

/// Advective right-hand side -dealias(u . grad omega) with u recovered from
/// omega. Zero-mean to rounding (the recovered u is orthogonal to every
/// wavevector, so the product's mean coefficient cancels exactly).
ScalarField nonlinear_term(const ScalarField& omega);

/// One IFRK4 step of the vorticity equation with self-induced velocity.
/// CFL is checked against the entry velocity before stepping.
ScalarField ns_step(const ScalarField& omega, double dt, double nu,
                    double cfl_fraction = 0.5, std::size_t step_index = 0);

/// Forward run over [omega0.time, omega0.time + t_final] storing every step
/// (stride 1) plus diagnostics. The datum is dealias-projected once at
/// entry so the evolved state stays inside the retained band. Aborts with
/// NumericalError (CFL, non-finite state) naming the step.
Trajectory run_forward(const ScalarField& omega0, const SolverConfig& config);

/// Steps count for a (dt, t_final) pair; validates divisibility.
std::size_t step_count(double dt, double t_final);

}  // namespace vortexlab

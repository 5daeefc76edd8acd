#pragma once

#include "vortexlab/sources.hpp"
#include "vortexlab/trajectory.hpp"
#include "vortexlab/velocity_source.hpp"

namespace vortexlab {

/// Forward linear advection(-diffusion) d/dt w + u.grad w = nu lap w by the
/// frozen velocity source, IFRK4, CFL-gated. nu = 0 is pure transport.
Trajectory transport_forward(const ScalarField& w0, const VelocitySource& vel,
                             double dt, double t_final, double nu = 0.0,
                             double cfl_fraction = 0.5);

struct DualConfig {
  double nu = 0.0;
  double dt = 0.0;
  double t0 = 0.0;       // forward-time span is [t0, t_final]
  double t_final = 1.0;
  double q = 2.0;            // dual exponent; q < 2 is rejected
  double cfl_fraction = 0.5;
  double diag_p = 2.0;       // Lp tracked in the phi diagnostics
};

/// Backward dual problem
///   -d/dt phi - nu lap phi - div(phi u) = chi,   phi(., t_final) = phi_T
/// solved in reversed time (psi(s) = phi(T - s) advances by IFRK4 with the
/// advection sign flipped and the divergence form reduced to u.grad by
/// div u = 0). phi_T = nullptr means zero terminal data. The returned
/// trajectory is indexed by forward time: snapshots[k].time = k*dt.
Trajectory dual_backward(const DualConfig& config, const VelocitySource& vel,
                         const SpaceTimeSource& chi,
                         const ScalarField* phi_T = nullptr);

/// Description of the discrete forward stepper the adjoint transposes.
struct ForwardStepperSpec {
  /// Replay a stored self-induced (ns) trajectory: stage velocities are
  /// reconstructed bit-identically from the stride-1 snapshots.
  static ForwardStepperSpec ns_replay(const Trajectory* traj);
  /// Frozen-coefficient linear stepper (the transport_forward one).
  static ForwardStepperSpec frozen(const VelocitySource* vel);

  enum class Kind { ns_replay, frozen_velocity };
  Kind kind = Kind::frozen_velocity;
  const Trajectory* trajectory = nullptr;
  const VelocitySource* velocity = nullptr;
};

/// Discrete-adjoint dual solve: phi_K = phi_T + c_K dt chi(t_K), then
/// phi_k = S_k^T phi_{k+1} + c_k dt chi(t_k) with S_k the k-th forward step
/// operator and trapezoid weights c (c_0 = c_K = 1/2). By construction
///   sum_k c_k dt <chi(t_k), w(t_k)> = <phi_0, w_0> - <phi_T, w_K>
/// holds to rounding for the paired forward trajectory. ns_replay requires
/// the trajectory stride-1 with matching grid/nu/dt/t_final.
Trajectory dual_backward_adjoint(const DualConfig& config,
                                 const ForwardStepperSpec& stepper,
                                 const SpaceTimeSource& chi,
                                 const ScalarField* phi_T = nullptr);

struct DualityResult {
  double pairing = 0.0;   // sum_k c_k dt <chi(t_k), w(t_k)>
  double boundary = 0.0;  // <phi_0, w_0> - <phi_T, w_K>
  double residual = 0.0;  // |pairing - boundary|
  double scale = 0.0;     // magnitudes of the paired terms
};

/// Evaluates the discrete duality identity for matched trajectories (same
/// grid, same time mesh). phi_T = nullptr means zero terminal data.
DualityResult duality_residual(const Trajectory& forward,
                               const Trajectory& dual,
                               const SpaceTimeSource& chi,
                               const ScalarField* phi_T = nullptr);

struct EnvelopeReport {
  double max_ratio_l2 = 0.0;  // max_t ||phi(t)||_2 / envelope_2(t)
  double max_ratio_lq = 0.0;
  double mass_drift = 0.0;    // max_t |int phi(t) dx - int phi(T) dx|
};

/// Checks the backward-in-time a priori envelopes
///   ||phi(t)||_r <= ||phi_T||_r + int_t^T ||chi(s)||_r ds,  r in {2, q}
/// (trapezoid time quadrature on the phi mesh) and records the mass drift
/// (the dual drift is in divergence form, so int phi is conserved when
/// chi == 0). Ratios <= 1 + slack are the expected regime.
EnvelopeReport dual_envelopes(const Trajectory& phi, const SpaceTimeSource& chi,
                              const ScalarField* phi_T, double q);

}  // namespace vortexlab

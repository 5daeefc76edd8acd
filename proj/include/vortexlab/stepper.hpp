#pragma once

#include <functional>

#include "vortexlab/field.hpp"

namespace vortexlab {

/// Advecting velocity for one RK stage: called with the stage time and the
/// spectral stage state. Self-induced flows derive u from the state
/// (Biot-Savart); frozen coefficients ignore it.
using StageVelocityFn =
    std::function<VectorField(double t, const Spectrum& stage_hat)>;

/// Additive right-hand-side source sampled at a stage time.
using StageSourceFn = std::function<ScalarField(double t)>;

/// The four advecting velocities realized inside one step, in stage order.
/// Capturing them freezes the step as a linear operator in the state, which
/// step_transpose then transposes exactly.
struct StageVelocities {
  VectorField a, b, c, d;
};

/// Integrating-factor RK4 step for
///   d/dt w = -nu |kappa|^2 w  (exact, spectral integrating factor)
///            + advect_sign * dealias(u . grad w)  (pseudospectral product)
///            + source(t)  (optional).
/// advect_sign = -1 gives forward advection (d/dt w + u.grad w = 0 parts),
/// +1 the time-reversed dual drift. Sample fields are the canonical step
/// handoff: step(w) -> w' maps physical samples to physical samples, so a
/// replayed step reproduces the forward arithmetic bit-for-bit.
class Ifrk4Engine {
 public:
  Ifrk4Engine(const Grid& grid, double nu, double dt, double advect_sign);

  const Grid& grid() const { return grid_; }
  double nu() const { return nu_; }
  double dt() const { return dt_; }

  /// One step from time t. Throws NumericalError on non-finite state.
  ScalarField step(const ScalarField& w, double t, const StageVelocityFn& vel,
                   const StageSourceFn* source = nullptr,
                   StageVelocities* capture = nullptr) const;

  /// Exact algebraic transpose of the linear map w -> step(w) obtained by
  /// freezing the captured stage velocities (sources excluded; they are
  /// affine shifts, not part of the operator). Satisfies
  /// <step(w), phi> == <w, step_transpose(phi)> to rounding in the h^2
  /// inner product.
  ScalarField step_transpose(const ScalarField& phi,
                             const StageVelocities& stages) const;

 private:
  Grid grid_;
  double nu_;
  double dt_;
  double sign_;
  std::vector<double> e_half_;  // exp(-nu kappa^2 dt/2) per mode
  std::vector<double> e_full_;  // exp(-nu kappa^2 dt)
};

/// dt <= cfl_fraction * h / max|u| gate; throws NumericalError naming the
/// step index on violation. max|u| = 0 passes trivially.
void check_cfl(const VectorField& u, double dt, double cfl_fraction,
               std::size_t step_index);

}  // namespace vortexlab

#pragma once

#include "vortexlab/field.hpp"

namespace vortexlab::biot_savart {

/// Velocity recovery on the torus: with psi the zero-mean solution of
/// lap(psi) = omega, u = (-d_y psi, d_x psi). In modes (kappa = 2*pi*k/L):
///   u_hat = (i kappa_2, -i kappa_1) omega_hat / |kappa|^2,  u_hat(0) = 0.
/// Unpaired Nyquist rows are zeroed (derivative convention). The k = 0 mode
/// of omega is ignored; a mean above 1e-12 of the field scale logs a
/// warning (the torus inversion only sees the zero-mean part).
VectorField velocity_from_vorticity(const ScalarField& omega);
VectorField velocity_from_spectrum(const Spectrum& omega_hat);

/// Spectral curl d_x u_y - d_y u_x; recovers the zero-mean part of omega.
ScalarField vorticity_from_velocity(const VectorField& u);

/// L2 norm of the spectral divergence d_x u_x + d_y u_y (same scaling as
/// lp_norm(.., 2)); a diagnostic that is ~1e-15 * |u| for recovered fields.
double divergence_l2(const VectorField& u);

/// Free-space kernel split K = K1 + K2 at the given radius, for
/// K(x) = x_perp / (2 pi |x|^2): returns the closed forms
///   inner_l1 = radius  (L1 norm of K restricted to |x| <= radius)
///   outer_sup = 1/(2 pi radius)  (sup norm of the rest).
struct KernelSplit {
  double inner_l1 = 0.0;
  double outer_sup = 0.0;
};
KernelSplit kernel_split_norms(double radius);

/// Discrete growth functional sup_x |u(x)| / (1 + dist(x, center)) with the
/// torus point distance; finite uniformly in nu for the sweep corpus.
double growth_ratio(const VectorField& u, double center_x, double center_y);

}  // namespace vortexlab::biot_savart

#pragma once

#include "vortexlab/field.hpp"

namespace vortexlab::spectral {

/// Forward transform, normalized so that
///   f(x) = sum_k coeffs_k exp(i (2*pi/L) k.x).
/// A pure mode sin((2*pi/L) x) therefore lands on two coefficients of
/// magnitude 1/2 at k = (+-1, 0). Rejects non-finite input.
Spectrum forward(const ScalarField& f);

/// Inverse transform. The imaginary residual of the complex inverse is
/// discarded; a residual above 1e-10 of the field magnitude (non-symmetric
/// spectrum) logs a warning. Round-trips forward() to ~1e-15.
ScalarField inverse(const Spectrum& s);

/// True when coeffs(-k) == conj(coeffs(k)) within rel_tol of the largest
/// coefficient magnitude.
bool is_conjugate_symmetric(const Spectrum& s, double rel_tol = 1e-12);

/// 2/3-rule mask: zeroes every mode with
/// max(|k1|, |k2|) > grid.dealias_fraction * n/2. Exact projection, so the
/// discrete L2 norm never increases.
void dealias_in_place(Spectrum& s);
Spectrum dealias(const Spectrum& s);

/// Spectral derivative multipliers (i * kappa with kappa = 2*pi*k/L).
/// The unpaired Nyquist row k = -n/2 is zeroed, the convention that keeps
/// derivatives of real fields real and antisymmetric.
void derivative_x_in_place(Spectrum& s);
void derivative_y_in_place(Spectrum& s);

/// Multiplies each coefficient by fn(k1, k2) (real multiplier, integer
/// wavenumbers). Conjugate symmetry is preserved for even fn.
template <typename Fn>
void multiply_modes(Spectrum& s, Fn&& fn) {
  const std::uint32_t n = s.grid.n_points;
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      s.coeffs[s.grid.idx(i, j)] *= fn(k1, k2);
    }
  }
}

/// Spectral gradient of a sample field (forward, i*kappa, inverse).
VectorField gradient(const ScalarField& f);

}  // namespace vortexlab::spectral

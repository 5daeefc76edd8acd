#include "vortexlab/biot_savart.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "vortexlab/errors.hpp"
#include "vortexlab/log.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab::biot_savart {

VectorField velocity_from_spectrum(const Spectrum& omega_hat) {
  const Grid& g = omega_hat.grid;
  const std::uint32_t n = g.n_points;
  const double two_pi_over_L = 2.0 * M_PI / g.side_length;
  const int nyquist = -static_cast<int>(n) / 2;

  double max_mag = 0.0;
  for (const auto& c : omega_hat.coeffs) max_mag = std::max(max_mag, std::abs(c));
  if (std::abs(omega_hat.coeffs[0]) > 1e-12 * std::max(max_mag, 1e-300)) {
    // Every step of a nonzero-mean run would repeat this; say it once.
    static std::atomic<bool> warned{false};
    if (!warned.exchange(true)) {
      log::warn("velocity_from_vorticity: nonzero-mean vorticity; the "
                "inversion uses only the zero-mean part (warned once)");
    }
  }

  Spectrum ux_hat(g, omega_hat.time);
  Spectrum uy_hat(g, omega_hat.time);
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      const std::size_t idx = g.idx(i, j);
      if ((k1 == 0 && k2 == 0) || k1 == nyquist || k2 == nyquist) continue;
      const double kx = two_pi_over_L * static_cast<double>(k1);
      const double ky = two_pi_over_L * static_cast<double>(k2);
      const double inv_k2 = 1.0 / (kx * kx + ky * ky);
      const std::complex<double> w = omega_hat.coeffs[idx];
      const std::complex<double> iw(-w.imag(), w.real());  // i * w
      ux_hat.coeffs[idx] = iw * (ky * inv_k2);
      uy_hat.coeffs[idx] = -iw * (kx * inv_k2);
    }
  }
  ux_hat.conjugate_symmetric = omega_hat.conjugate_symmetric;
  uy_hat.conjugate_symmetric = omega_hat.conjugate_symmetric;

  VectorField u(g, omega_hat.time);
  u.x = spectral::inverse(ux_hat).values;
  u.y = spectral::inverse(uy_hat).values;
  return u;
}

VectorField velocity_from_vorticity(const ScalarField& omega) {
  return velocity_from_spectrum(spectral::forward(omega));
}

ScalarField vorticity_from_velocity(const VectorField& u) {
  ScalarField ux(u.grid, u.time);
  ux.values = u.x;
  ScalarField uy(u.grid, u.time);
  uy.values = u.y;
  Spectrum duy_dx = spectral::forward(uy);
  spectral::derivative_x_in_place(duy_dx);
  Spectrum dux_dy = spectral::forward(ux);
  spectral::derivative_y_in_place(dux_dy);
  for (std::size_t k = 0; k < duy_dx.coeffs.size(); ++k) {
    duy_dx.coeffs[k] -= dux_dy.coeffs[k];
  }
  return spectral::inverse(duy_dx);
}

double divergence_l2(const VectorField& u) {
  ScalarField ux(u.grid, u.time);
  ux.values = u.x;
  ScalarField uy(u.grid, u.time);
  uy.values = u.y;
  Spectrum dux_dx = spectral::forward(ux);
  spectral::derivative_x_in_place(dux_dx);
  Spectrum duy_dy = spectral::forward(uy);
  spectral::derivative_y_in_place(duy_dy);
  double sum = 0.0;
  for (std::size_t k = 0; k < dux_dx.coeffs.size(); ++k) {
    sum += std::norm(dux_dx.coeffs[k] + duy_dy.coeffs[k]);
  }
  const double L = u.grid.side_length;
  return std::sqrt(L * L * sum);  // Parseval: matches lp_norm(.., 2) scaling
}

KernelSplit kernel_split_norms(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("kernel_split_norms: radius must be positive, got " +
                          std::to_string(radius));
  }
  // |K(x)| = 1/(2 pi |x|): the L1 norm over the disc |x| <= r integrates
  // to r exactly; the tail sup is attained on |x| = r.
  KernelSplit s;
  s.inner_l1 = radius;
  s.outer_sup = 1.0 / (2.0 * M_PI * radius);
  return s;
}

double growth_ratio(const VectorField& u, double center_x, double center_y) {
  const Grid& g = u.grid;
  const std::uint32_t n = g.n_points;
  double best = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::size_t k = g.idx(i, j);
      const double mag = std::hypot(u.x[k], u.y[k]);
      const double d = torus_distance(g, g.x(i), g.y(j), center_x, center_y);
      best = std::max(best, mag / (1.0 + d));
    }
  }
  return best;
}

}  // namespace vortexlab::biot_savart

#include "vortexlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "vortexlab/errors.hpp"
#include "vortexlab/log.hpp"

namespace vortexlab::spectral {

namespace {

// One forward + one backward c2c plan per grid size, created once under a
// lock (FFTW planning is not thread-safe; execution on distinct buffers is).
// FFTW_ESTIMATE keeps plan selection deterministic across runs, and
// FFTW_UNALIGNED lets the plans run on any std::vector storage via
// fftw_execute_dft.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

PlanPair& plans_for(std::uint32_t n) {
  static std::mutex mutex;
  static std::map<std::uint32_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::size_t count = static_cast<std::size_t>(n) * n;
  fftw_complex* in = fftw_alloc_complex(count);
  fftw_complex* out = fftw_alloc_complex(count);
  if (in == nullptr || out == nullptr) {
    throw NumericalError("spectral: fftw allocation failed");
  }
  PlanPair p;
  const int ni = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  p.fwd = fftw_plan_dft_2d(ni, ni, in, out, FFTW_FORWARD, flags);
  p.bwd = fftw_plan_dft_2d(ni, ni, in, out, FFTW_BACKWARD, flags);
  fftw_free(in);
  fftw_free(out);
  if (p.fwd == nullptr || p.bwd == nullptr) {
    throw NumericalError("spectral: fftw plan creation failed");
  }
  return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(std::vector<std::complex<double>>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

}  // namespace

Spectrum forward(const ScalarField& f) {
  require_finite(f.values, "spectral::forward");
  const std::uint32_t n = f.grid.n_points;
  Spectrum s(f.grid, f.time);
  std::vector<std::complex<double>> in(f.grid.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = {f.values[i], 0.0};
  fftw_execute_dft(plans_for(n).fwd, as_fftw(in), as_fftw(s.coeffs));
  const double scale = 1.0 / static_cast<double>(f.grid.size());
  for (auto& c : s.coeffs) c *= scale;
  s.conjugate_symmetric = true;  // transform of real samples
  return s;
}

ScalarField inverse(const Spectrum& s) {
  const std::uint32_t n = s.grid.n_points;
  std::vector<std::complex<double>> in(s.coeffs);
  std::vector<std::complex<double>> out(s.grid.size());
  fftw_execute_dft(plans_for(n).bwd, as_fftw(in), as_fftw(out));
  ScalarField f(s.grid, s.time);
  double real_mag = 0.0;
  double imag_mag = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    f.values[i] = out[i].real();
    real_mag = std::max(real_mag, std::fabs(out[i].real()));
    imag_mag = std::max(imag_mag, std::fabs(out[i].imag()));
  }
  if (imag_mag > 1e-10 * std::max(real_mag, 1e-300)) {
    log::warn("spectral::inverse: discarding imaginary part of relative size " +
              std::to_string(imag_mag / std::max(real_mag, 1e-300)));
  }
  require_finite(f.values, "spectral::inverse");
  return f;
}

bool is_conjugate_symmetric(const Spectrum& s, double rel_tol) {
  const std::uint32_t n = s.grid.n_points;
  double max_mag = 0.0;
  for (const auto& c : s.coeffs) max_mag = std::max(max_mag, std::abs(c));
  const double tol = rel_tol * std::max(max_mag, 1e-300);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t mi = (n - i) % n;
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::uint32_t mj = (n - j) % n;
      const auto diff = s.coeffs[s.grid.idx(i, j)] -
                        std::conj(s.coeffs[s.grid.idx(mi, mj)]);
      if (std::abs(diff) > tol) return false;
    }
  }
  return true;
}

void dealias_in_place(Spectrum& s) {
  const std::uint32_t n = s.grid.n_points;
  const double cutoff = s.grid.cutoff();
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      if (std::max(std::abs(k1), std::abs(k2)) > cutoff) {
        s.coeffs[s.grid.idx(i, j)] = {0.0, 0.0};
      }
    }
  }
}

Spectrum dealias(const Spectrum& s) {
  Spectrum out = s;
  dealias_in_place(out);
  return out;
}

namespace {

// i*kappa multiplier along one axis; the Nyquist row is zeroed so real
// fields keep real derivatives.
void derivative_in_place(Spectrum& s, bool along_x) {
  const std::uint32_t n = s.grid.n_points;
  const double two_pi_over_L = 2.0 * M_PI / s.grid.side_length;
  const int nyquist = -static_cast<int>(n) / 2;
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      const int k = along_x ? k1 : k2;
      auto& c = s.coeffs[s.grid.idx(i, j)];
      if (k == nyquist) {
        c = {0.0, 0.0};
      } else {
        const double kappa = two_pi_over_L * static_cast<double>(k);
        c = std::complex<double>(-c.imag() * kappa, c.real() * kappa);
      }
    }
  }
}

}  // namespace

void derivative_x_in_place(Spectrum& s) { derivative_in_place(s, true); }
void derivative_y_in_place(Spectrum& s) { derivative_in_place(s, false); }

VectorField gradient(const ScalarField& f) {
  Spectrum s = forward(f);
  Spectrum sx = s;
  derivative_x_in_place(sx);
  derivative_y_in_place(s);
  VectorField g(f.grid, f.time);
  g.x = inverse(sx).values;
  g.y = inverse(s).values;
  return g;
}

}  // namespace vortexlab::spectral

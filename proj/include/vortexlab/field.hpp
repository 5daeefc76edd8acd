#pragma once

#include <complex>
#include <vector>

#include "vortexlab/grid.hpp"

namespace vortexlab {

/// Real scalar sample field on a Grid, tagged with a solution time.
struct ScalarField {
  Grid grid;
  double time = 0.0;
  std::vector<double> values;  // grid.size() entries, row-major

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double t = 0.0)
      : grid(g), time(t), values(g.size(), 0.0) {}

  double& at(std::uint32_t i, std::uint32_t j) { return values[grid.idx(i, j)]; }
  double at(std::uint32_t i, std::uint32_t j) const {
    return values[grid.idx(i, j)];
  }
};

/// Real 2-component sample field (x and y components share the grid).
struct VectorField {
  Grid grid;
  double time = 0.0;
  std::vector<double> x;  // grid.size() entries each
  std::vector<double> y;

  VectorField() = default;
  explicit VectorField(const Grid& g, double t = 0.0)
      : grid(g), time(t), x(g.size(), 0.0), y(g.size(), 0.0) {}
};

/// Complex Fourier coefficients indexed by integer wavevectors
/// k = (k1, k2), k_i in [-n/2, n/2). Storage mirrors the sample layout:
/// coeffs[ki*n + kj] where ki, kj are wrapped indices (wavenumber(ki) is
/// ki for ki < n/2 and ki - n otherwise). Coefficients follow the
/// convention f(x) = sum_k fhat_k exp(i 2*pi/L k.x), so transform_forward
/// divides by n^2.
struct Spectrum {
  Grid grid;
  double time = 0.0;
  bool conjugate_symmetric = false;
  std::vector<std::complex<double>> coeffs;

  Spectrum() = default;
  explicit Spectrum(const Grid& g, double t = 0.0)
      : grid(g), time(t), coeffs(g.size(), {0.0, 0.0}) {}

  std::complex<double>& at(std::uint32_t ki, std::uint32_t kj) {
    return coeffs[grid.idx(ki, kj)];
  }
  std::complex<double> at(std::uint32_t ki, std::uint32_t kj) const {
    return coeffs[grid.idx(ki, kj)];
  }
};

/// Integer wavenumber for wrapped index i on an n-point grid: i, or i - n
/// for the upper half (so values lie in [-n/2, n/2)).
inline int wavenumber(std::uint32_t i, std::uint32_t n) {
  return i < n / 2 ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
}

/// Throws ValidationError if any entry is NaN/Inf (message names `what`).
void require_finite(const std::vector<double>& values, const char* what);
void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace vortexlab

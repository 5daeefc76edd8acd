#pragma once

#include <cstddef>
#include <cstdint>

namespace vortexlab {

/// Uniform periodic grid on the square torus [0, side_length)^2.
///
/// Points are x_i = i*h, y_j = j*h with h = side_length/n_points; sample
/// arrays are row-major with index i*n_points + j (i along x, j along y).
/// dealias_fraction is the spectral cutoff used by the 2/3-rule mask: modes
/// with max(|k1|,|k2|) > dealias_fraction * n_points/2 are zeroed.
struct Grid {
  std::uint32_t n_points = 0;
  double side_length = 0.0;
  double dealias_fraction = 2.0 / 3.0;

  double h() const { return side_length / static_cast<double>(n_points); }
  std::size_t size() const {
    return static_cast<std::size_t>(n_points) * n_points;
  }
  std::size_t idx(std::uint32_t i, std::uint32_t j) const {
    return static_cast<std::size_t>(i) * n_points + j;
  }
  double x(std::uint32_t i) const { return h() * static_cast<double>(i); }
  double y(std::uint32_t j) const { return h() * static_cast<double>(j); }

  /// Dealias cutoff in integer-wavenumber units.
  double cutoff() const {
    return dealias_fraction * static_cast<double>(n_points) / 2.0;
  }

  bool operator==(const Grid&) const = default;
};

/// Validates and builds a grid. n_points must be a power of two >= 8,
/// side_length > 0, dealias_fraction in (0, 1]. Throws ValidationError.
Grid make_grid(std::uint32_t n_points, double side_length,
               double dealias_fraction = 2.0 / 3.0);

/// Shortest distance between two points of the torus [0,L)^2.
double torus_distance(const Grid& grid, double x0, double y0, double x1,
                      double y1);

}  // namespace vortexlab

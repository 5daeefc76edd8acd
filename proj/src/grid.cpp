#include "vortexlab/grid.hpp"

#include <cmath>
#include <string>

#include "vortexlab/errors.hpp"

namespace vortexlab {

Grid make_grid(std::uint32_t n_points, double side_length,
               double dealias_fraction) {
  if (n_points < 8 || (n_points & (n_points - 1)) != 0) {
    throw ValidationError("make_grid: n_points must be a power of two >= 8, got " +
                          std::to_string(n_points));
  }
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw ValidationError("make_grid: side_length must be positive and finite");
  }
  if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0) {
    throw ValidationError("make_grid: dealias_fraction must lie in (0, 1]");
  }
  Grid g;
  g.n_points = n_points;
  g.side_length = side_length;
  g.dealias_fraction = dealias_fraction;
  return g;
}

double torus_distance(const Grid& grid, double x0, double y0, double x1,
                      double y1) {
  const double L = grid.side_length;
  double dx = std::fabs(std::fmod(x0 - x1, L));
  double dy = std::fabs(std::fmod(y0 - y1, L));
  if (dx > L / 2.0) dx = L - dx;
  if (dy > L / 2.0) dy = L - dy;
  return std::hypot(dx, dy);
}

}  // namespace vortexlab

#include "vortexlab/norms.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vortexlab/errors.hpp"

namespace vortexlab {

namespace {

// Kahan-compensated accumulator. The pairings and mass integrals feed
// identities checked near rounding level, where naive summation noise on a
// 128^2 grid already shows up.
struct Accum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

void require_p(double p, const char* what) {
  if (std::isnan(p) || p < 1.0) {
    throw ValidationError(std::string(what) + ": p must be >= 1 (or inf), got " +
                          std::to_string(p));
  }
}

void require_radius(const Grid& g, double radius, const char* what) {
  if (!(radius > 0.0) || !(radius < g.side_length / 2.0)) {
    throw ValidationError(std::string(what) +
                          ": ball radius must lie in (0, side_length/2)");
  }
}

}  // namespace

double integrate(const ScalarField& f) {
  const double h = f.grid.h();
  Accum acc;
  for (double v : f.values) acc.add(v);
  return h * h * acc.sum;
}

double inner_product(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid, b.grid, "inner_product");
  const double h = a.grid.h();
  Accum acc;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    acc.add(a.values[i] * b.values[i]);
  }
  return h * h * acc.sum;
}

double lp_norm(const ScalarField& f, double p) {
  require_p(p, "lp_norm");
  if (std::isinf(p)) return max_abs(f);
  const double h = f.grid.h();
  Accum acc;
  for (double v : f.values) acc.add(std::pow(std::fabs(v), p));
  return std::pow(h * h * acc.sum, 1.0 / p);
}

double lp_norm(const VectorField& f, double p) {
  require_p(p, "lp_norm");
  if (std::isinf(p)) return max_magnitude(f);
  const double h = f.grid.h();
  Accum acc;
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    acc.add(std::pow(std::hypot(f.x[i], f.y[i]), p));
  }
  return std::pow(h * h * acc.sum, 1.0 / p);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::fabs(v));
  return m;
}

double max_magnitude(const VectorField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.x.size(); ++i) {
    m = std::max(m, std::hypot(f.x[i], f.y[i]));
  }
  return m;
}

namespace {

template <typename Mag>
double local_lp(const Grid& g, double p, double cx, double cy, double radius,
                Mag&& magnitude_at) {
  const std::uint32_t n = g.n_points;
  const bool inf = std::isinf(p);
  double sum = 0.0;
  double mx = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (torus_distance(g, g.x(i), g.y(j), cx, cy) > radius) continue;
      const double m = magnitude_at(g.idx(i, j));
      if (inf) {
        mx = std::max(mx, m);
      } else {
        sum += std::pow(m, p);
      }
    }
  }
  if (inf) return mx;
  const double h = g.h();
  return std::pow(h * h * sum, 1.0 / p);
}

}  // namespace

double local_lp_distance(const ScalarField& a, const ScalarField& b, double p,
                         double center_x, double center_y, double radius) {
  require_same_grid(a.grid, b.grid, "local_lp_distance");
  require_p(p, "local_lp_distance");
  require_radius(a.grid, radius, "local_lp_distance");
  return local_lp(a.grid, p, center_x, center_y, radius, [&](std::size_t k) {
    return std::fabs(a.values[k] - b.values[k]);
  });
}

double local_lp_distance(const VectorField& a, const VectorField& b, double p,
                         double center_x, double center_y, double radius) {
  require_same_grid(a.grid, b.grid, "local_lp_distance");
  require_p(p, "local_lp_distance");
  require_radius(a.grid, radius, "local_lp_distance");
  return local_lp(a.grid, p, center_x, center_y, radius, [&](std::size_t k) {
    return std::hypot(a.x[k] - b.x[k], a.y[k] - b.y[k]);
  });
}

}  // namespace vortexlab

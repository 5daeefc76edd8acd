#include "vortexlab/initial_data.hpp"

#include <cmath>
#include <random>
#include <string>

#include "vortexlab/errors.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab {

DatumKind datum_kind_from_string(const std::string& name) {
  if (name == "power_singularity") return DatumKind::power_singularity;
  if (name == "vortex_patch") return DatumKind::vortex_patch;
  if (name == "taylor_green") return DatumKind::taylor_green;
  if (name == "custom_modes") return DatumKind::custom_modes;
  throw ValidationError("unknown datum kind: " + name);
}

std::string to_string(DatumKind kind) {
  switch (kind) {
    case DatumKind::power_singularity: return "power_singularity";
    case DatumKind::vortex_patch: return "vortex_patch";
    case DatumKind::taylor_green: return "taylor_green";
    case DatumKind::custom_modes: return "custom_modes";
  }
  return "?";
}

double bump_profile(double s) {
  const double a = std::fabs(s);
  if (a >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

namespace {

void validate_spec(const Grid& grid, const InitialDatumSpec& spec) {
  const bool localized = spec.kind == DatumKind::power_singularity ||
                         spec.kind == DatumKind::vortex_patch;
  if (localized) {
    const double L = grid.side_length;
    const double R = spec.support_radius;
    if (!(R > 0.0) || !(R < L / 4.0)) {
      throw ValidationError("make_rough_datum: support_radius must lie in "
                            "(0, side_length/4)");
    }
    if (R / grid.h() < 8.0) {
      throw ValidationError("make_rough_datum: support_radius covered by "
                            "fewer than 8 cells; refine the grid");
    }
  }
  if (!std::isfinite(spec.amplitude)) {
    throw ValidationError("make_rough_datum: amplitude must be finite");
  }
  if (spec.kind == DatumKind::power_singularity) {
    if (!(spec.p > 1.0) || !(spec.p < 2.0)) {
      throw ValidationError("make_rough_datum: power_singularity requires "
                            "p in (1, 2)");
    }
    if (!(spec.gamma > 1.0) || !(spec.gamma < 2.0 / spec.p)) {
      throw ValidationError("make_rough_datum: power_singularity requires "
                            "1 < gamma < 2/p");
    }
  }
}

std::array<double, 2> resolve_center(const Grid& grid,
                                     const InitialDatumSpec& spec) {
  double cx = spec.center_x;
  double cy = spec.center_y;
  if (cx == 0.0 && cy == 0.0) {
    cx = grid.side_length / 2.0;
    cy = grid.side_length / 2.0;
  }
  return {cx, cy};
}

void validate_margin(const Grid& grid, double cx, double cy, double R) {
  const double L = grid.side_length;
  const double margin =
      std::min(std::min(cx - R, L - cx - R), std::min(cy - R, L - cy - R));
  if (margin < L / 4.0) {
    throw ValidationError("make_rough_datum: support must stay at least "
                          "side_length/4 away from the domain edge");
  }
}

ScalarField build_custom_modes(const Grid& grid, const InitialDatumSpec& spec) {
  // Seeded band-limited field: random coefficients on max(|k1|,|k2|) <= 4,
  // conjugate-symmetrized through the real inverse transform, zero mean.
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int band = 4;
  ScalarField f(grid, 0.0);
  const double two_pi_over_L = 2.0 * M_PI / grid.side_length;
  struct Mode {
    double kx, ky, amp, phase;
  };
  std::vector<Mode> modes;
  for (int k1 = -band; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      // Keep one representative per conjugate pair.
      if (k1 < 0 || (k1 == 0 && k2 < 0)) continue;
      const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      modes.push_back({two_pi_over_L * k1, two_pi_over_L * k2,
                       decay * unif(rng), M_PI * unif(rng)});
    }
  }
  for (std::uint32_t i = 0; i < grid.n_points; ++i) {
    for (std::uint32_t j = 0; j < grid.n_points; ++j) {
      const double x = grid.x(i);
      const double y = grid.y(j);
      double v = 0.0;
      for (const Mode& m : modes) {
        v += m.amp * std::cos(m.kx * x + m.ky * y + m.phase);
      }
      f.at(i, j) = v;
    }
  }
  const double peak = max_abs(f);
  if (peak > 0.0) {
    const double scale = spec.amplitude / peak;
    for (double& v : f.values) v *= scale;
  }
  return f;
}

}  // namespace

ScalarField make_rough_datum(const Grid& grid, const InitialDatumSpec& spec) {
  validate_spec(grid, spec);
  const auto [cx, cy] = resolve_center(grid, spec);
  const double R = spec.support_radius;
  const double A = spec.amplitude;
  const double h = grid.h();

  ScalarField f(grid, 0.0);
  switch (spec.kind) {
    case DatumKind::power_singularity: {
      validate_margin(grid, cx, cy, R);
      for (std::uint32_t i = 0; i < grid.n_points; ++i) {
        for (std::uint32_t j = 0; j < grid.n_points; ++j) {
          const double r = torus_distance(grid, grid.x(i), grid.y(j), cx, cy);
          if (r >= R) continue;
          const double r_capped = std::max(r, h);
          f.at(i, j) = A * std::pow(r_capped, -spec.gamma) * bump_profile(r / R);
        }
      }
      break;
    }
    case DatumKind::vortex_patch: {
      validate_margin(grid, cx, cy, R);
      for (std::uint32_t i = 0; i < grid.n_points; ++i) {
        for (std::uint32_t j = 0; j < grid.n_points; ++j) {
          const double r = torus_distance(grid, grid.x(i), grid.y(j), cx, cy);
          if (r <= R) f.at(i, j) = A;
        }
      }
      break;
    }
    case DatumKind::taylor_green: {
      const double k = 2.0 * M_PI / grid.side_length;
      for (std::uint32_t i = 0; i < grid.n_points; ++i) {
        for (std::uint32_t j = 0; j < grid.n_points; ++j) {
          f.at(i, j) = 2.0 * A * std::sin(k * grid.x(i)) * std::sin(k * grid.y(j));
        }
      }
      break;
    }
    case DatumKind::custom_modes:
      f = build_custom_modes(grid, spec);
      break;
  }
  return f;
}

ScalarField mollify(const ScalarField& f, double delta) {
  if (std::isnan(delta) || delta < 0.0) {
    throw ValidationError("mollify: delta must be >= 0");
  }
  if (delta == 0.0) return f;
  Spectrum s = spectral::forward(f);
  const double two_pi_over_L = 2.0 * M_PI / f.grid.side_length;
  const double c = 0.5 * delta * delta * two_pi_over_L * two_pi_over_L;
  spectral::multiply_modes(s, [c](int k1, int k2) {
    return std::exp(-c * static_cast<double>(k1 * k1 + k2 * k2));
  });
  return spectral::inverse(s);
}

}  // namespace vortexlab

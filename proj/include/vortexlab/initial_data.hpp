#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "vortexlab/field.hpp"

namespace vortexlab {

/// Recipe for the initial vorticity.
///
/// power_singularity is the working rough datum: amplitude * r^(-gamma)
/// times a smooth compactly supported bump, with 1 < gamma < 2/p so the
/// datum lies in Lp but not L2 in the continuum limit. On the grid the
/// singular value is capped at the cell scale h. vortex_patch is the sharp
/// indicator disc, taylor_green the global 2 A sin(kx) sin(ky) datum, and
/// custom_modes a seeded random band-limited field (|k| <= 4) scaled to the
/// requested amplitude.
enum class DatumKind {
  power_singularity,
  vortex_patch,
  taylor_green,
  custom_modes,
};

struct InitialDatumSpec {
  DatumKind kind = DatumKind::power_singularity;
  double p = 1.5;              // target Lp exponent, in (1, 2)
  double gamma = 1.2;          // singularity strength, in (1, 2/p)
  double support_radius = 2.0; // < side_length/4
  double center_x = 0.0;       // 0 means "domain center" (resolved at build)
  double center_y = 0.0;
  double amplitude = 1.0;
  std::uint64_t seed = 1u;     // custom_modes only
};

DatumKind datum_kind_from_string(const std::string& name);
std::string to_string(DatumKind kind);

/// Builds the datum on the grid. Validates the spec: support_radius must be
/// covered by >= 8 cells and stay side_length/4 clear of the domain edge
/// (compact kinds), and power_singularity requires 1 < gamma < 2/p.
ScalarField make_rough_datum(const Grid& grid, const InitialDatumSpec& spec);

/// C-infinity bump profile: exp(1 - 1/(1-s^2)) on [0,1), 0 beyond. Equals 1
/// at s = 0 and vanishes with all derivatives at s = 1.
double bump_profile(double s);

/// Gaussian mollification exp(delta^2 lap / 2): spectral multiplier
/// exp(-delta^2 kappa^2 / 2). delta = 0 is the identity; mass is conserved
/// exactly and every Lp norm is non-increasing.
ScalarField mollify(const ScalarField& f, double delta);

}  // namespace vortexlab

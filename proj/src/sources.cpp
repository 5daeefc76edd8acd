#include "vortexlab/sources.hpp"

#include <cmath>

#include "vortexlab/errors.hpp"
#include "vortexlab/initial_data.hpp"
#include "vortexlab/norms.hpp"

namespace vortexlab {

double TimeBump::operator()(double t) const {
  const double mid = 0.5 * (t_start + t_end);
  const double half = 0.5 * (t_end - t_start);
  if (half <= 0.0) return 0.0;
  return bump_profile((t - mid) / half);
}

struct SpaceTimeSource::Impl {
  Grid grid;
  std::string name;
  bool zero = false;
  // separable
  bool separable = false;
  ScalarField profile;
  TimeBump window;
  // generic
  std::function<ScalarField(double)> fn;
};

SpaceTimeSource SpaceTimeSource::zero(const Grid& grid) {
  auto impl = std::make_shared<Impl>();
  impl->grid = grid;
  impl->name = "zero";
  impl->zero = true;
  SpaceTimeSource s;
  s.impl_ = std::move(impl);
  return s;
}

SpaceTimeSource SpaceTimeSource::separable(ScalarField profile, TimeBump window,
                                           std::string name) {
  require_finite(profile.values, "SpaceTimeSource::separable");
  if (!(window.t_end > window.t_start)) {
    throw ValidationError("SpaceTimeSource: need t_end > t_start");
  }
  auto impl = std::make_shared<Impl>();
  impl->grid = profile.grid;
  impl->name = std::move(name);
  impl->separable = true;
  impl->profile = std::move(profile);
  impl->window = window;
  SpaceTimeSource s;
  s.impl_ = std::move(impl);
  return s;
}

SpaceTimeSource SpaceTimeSource::callback(const Grid& grid,
                                          std::function<ScalarField(double)> fn,
                                          std::string name) {
  if (!fn) throw ValidationError("SpaceTimeSource::callback: empty callback");
  auto impl = std::make_shared<Impl>();
  impl->grid = grid;
  impl->name = std::move(name);
  impl->fn = std::move(fn);
  SpaceTimeSource s;
  s.impl_ = std::move(impl);
  return s;
}

ScalarField SpaceTimeSource::at(double t) const {
  const Impl& im = *impl_;
  if (im.zero) return ScalarField(im.grid, t);
  if (im.separable) {
    const double m = im.window(t);
    ScalarField out(im.grid, t);
    if (m != 0.0) {
      for (std::size_t k = 0; k < out.values.size(); ++k) {
        out.values[k] = m * im.profile.values[k];
      }
    }
    return out;
  }
  ScalarField out = im.fn(t);
  require_same_grid(out.grid, im.grid, "SpaceTimeSource::at");
  out.time = t;
  return out;
}

bool SpaceTimeSource::is_zero() const { return impl_->zero; }
const Grid& SpaceTimeSource::grid() const { return impl_->grid; }
const std::string& SpaceTimeSource::name() const { return impl_->name; }

double SpaceTimeSource::lp_norm_at(double t, double p) const {
  const Impl& im = *impl_;
  if (im.zero) return 0.0;
  if (im.separable) return im.window(t) * lp_norm(im.profile, p);
  return lp_norm(at(t), p);
}

ScalarField tensor_bump(const Grid& grid, double cx, double cy, double w,
                        double amplitude) {
  if (!(w > 0.0) || w >= grid.side_length / 2.0) {
    throw ValidationError("tensor_bump: width must lie in (0, side_length/2)");
  }
  ScalarField f(grid, 0.0);
  const double L = grid.side_length;
  for (std::uint32_t i = 0; i < grid.n_points; ++i) {
    double dx = std::fabs(std::fmod(grid.x(i) - cx, L));
    if (dx > L / 2.0) dx = L - dx;
    const double bx = bump_profile(dx / w);
    if (bx == 0.0) continue;
    for (std::uint32_t j = 0; j < grid.n_points; ++j) {
      double dy = std::fabs(std::fmod(grid.y(j) - cy, L));
      if (dy > L / 2.0) dy = L - dy;
      f.at(i, j) = amplitude * bx * bump_profile(dy / w);
    }
  }
  return f;
}

std::vector<SpaceTimeSource> default_chi_bank(const Grid& grid, double t_final,
                                              double center_x, double center_y,
                                              double spatial_width) {
  if (!(t_final > 0.0)) {
    throw ValidationError("default_chi_bank: t_final must be positive");
  }
  const double T = t_final;
  const double off = spatial_width;  // place the bumps around the datum
  struct Entry {
    double cx_off, cy_off, t0, t1;
    const char* name;
  };
  const Entry entries[3] = {
      {0.0, 0.0, 0.10 * T, 0.34 * T, "chi_early_center"},
      {off, 0.0, 0.38 * T, 0.62 * T, "chi_mid_east"},
      {-0.5 * off, off, 0.66 * T, 0.90 * T, "chi_late_northwest"},
  };
  std::vector<SpaceTimeSource> bank;
  for (const Entry& e : entries) {
    bank.push_back(SpaceTimeSource::separable(
        tensor_bump(grid, center_x + e.cx_off, center_y + e.cy_off,
                    spatial_width, 1.0),
        TimeBump{e.t0, e.t1}, e.name));
  }
  return bank;
}

}  // namespace vortexlab

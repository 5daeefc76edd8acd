#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "vortexlab/field.hpp"

namespace vortexlab {

/// Smooth compactly supported time profile: bump_profile mapped onto
/// [t_start, t_end], zero outside (with every derivative).
struct TimeBump {
  double t_start = 0.0;
  double t_end = 1.0;
  double operator()(double t) const;
};

/// Space-time source chi(x, t) for the dual problem. The workhorse is the
/// separable class g(x) * m(t) (cheap to evaluate per RK stage and exactly
/// describable in run manifests); a generic callback escape hatch covers
/// everything else. Evaluations outside the support return zero fields.
class SpaceTimeSource {
 public:
  static SpaceTimeSource zero(const Grid& grid);
  static SpaceTimeSource separable(ScalarField profile, TimeBump window,
                                   std::string name);
  static SpaceTimeSource callback(const Grid& grid,
                                  std::function<ScalarField(double)> fn,
                                  std::string name);

  ScalarField at(double t) const;
  bool is_zero() const;
  const Grid& grid() const;
  const std::string& name() const;

  /// For separable sources: spatial Lp norm and the time profile, used by
  /// the closed-form envelope ||chi(t)||_p = m(t) * ||g||_p. Generic
  /// sources fall back to evaluating at(t).
  double lp_norm_at(double t, double p) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Tensor bump amplitude * bump(dx/w) * bump(dy/w) around (cx, cy) with
/// torus-wrapped displacements; support radius w per axis.
ScalarField tensor_bump(const Grid& grid, double cx, double cy, double w,
                        double amplitude = 1.0);

/// Default 3-element dual-source bank: separable tensor bumps placed around
/// `center`, temporal supports pairwise disjoint inside (0.1 T, 0.9 T).
std::vector<SpaceTimeSource> default_chi_bank(const Grid& grid, double t_final,
                                              double center_x, double center_y,
                                              double spatial_width);

}  // namespace vortexlab

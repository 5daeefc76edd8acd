#pragma once

#include <functional>
#include <memory>
#include <string>

#include "vortexlab/trajectory.hpp"

namespace vortexlab {

/// Time-indexed advecting velocity for the linear solves. Two flavors:
/// an analytic callback, or linear-in-time interpolation of the
/// Biot-Savart velocities of a stored vorticity trajectory (interpolating
/// recovered velocities or recovering from interpolated vorticity agree:
/// the inversion is linear). Queries must stay inside the source's time
/// span (1e-9 rounding slack). Sampled fields are divergence-free; the
/// first few queries are verified spectrally (1e-10 relative), later ones
/// trusted. Instances are safely shareable read-only across threads.
class VelocitySource {
 public:
  static VelocitySource analytic(const Grid& grid,
                                 std::function<VectorField(double)> fn,
                                 std::string name, double t0, double t1);

  /// Keeps a shared reference; the trajectory must be stride-1.
  static VelocitySource from_trajectory(std::shared_ptr<const Trajectory> traj);

  VectorField at(double t) const;
  const Grid& grid() const;
  const std::string& name() const;
  double t0() const;
  double t1() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace vortexlab

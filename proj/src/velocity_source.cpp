#include "vortexlab/velocity_source.hpp"

#include <cmath>
#include <deque>
#include <mutex>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/norms.hpp"

namespace vortexlab {

struct VelocitySource::Impl {
  Grid grid;
  std::string name;
  double t0 = 0.0;
  double t1 = 0.0;
  std::function<VectorField(double)> analytic_fn;
  std::shared_ptr<const Trajectory> traj;

  // Small ring cache of recovered per-snapshot velocities; both solve
  // directions walk the mesh monotonically, so a handful of entries wins.
  mutable std::mutex mutex;
  mutable std::deque<std::pair<std::size_t, VectorField>> cache;
  mutable int checks_left = 3;

  VectorField recovered(std::size_t k) const {
    {
      std::lock_guard<std::mutex> lock(mutex);
      for (const auto& item : cache) {
        if (item.first == k) return item.second;
      }
    }
    VectorField u = biot_savart::velocity_from_vorticity(traj->snapshots[k]);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace_back(k, u);
    while (cache.size() > 6) cache.pop_front();
    return u;
  }
};

VelocitySource VelocitySource::analytic(const Grid& grid,
                                        std::function<VectorField(double)> fn,
                                        std::string name, double t0, double t1) {
  if (!fn) throw ValidationError("VelocitySource::analytic: empty callback");
  if (!(t1 > t0)) {
    throw ValidationError("VelocitySource::analytic: need t1 > t0");
  }
  auto impl = std::make_shared<Impl>();
  impl->grid = grid;
  impl->name = std::move(name);
  impl->t0 = t0;
  impl->t1 = t1;
  impl->analytic_fn = std::move(fn);
  VelocitySource v;
  v.impl_ = std::move(impl);
  return v;
}

VelocitySource VelocitySource::from_trajectory(
    std::shared_ptr<const Trajectory> traj) {
  if (traj == nullptr || traj->snapshots.size() < 2) {
    throw ValidationError("VelocitySource::from_trajectory: need a trajectory "
                          "with at least two snapshots");
  }
  if (!traj->is_stride_one()) {
    throw ValidationError("VelocitySource::from_trajectory: trajectory must "
                          "be stride-1 on a uniform time mesh");
  }
  auto impl = std::make_shared<Impl>();
  impl->grid = traj->grid;
  impl->name = "trajectory(" + traj->role + ")";
  impl->t0 = traj->t0();
  impl->t1 = traj->t_final();
  impl->traj = std::move(traj);
  VelocitySource v;
  v.impl_ = std::move(impl);
  return v;
}

VectorField VelocitySource::at(double t) const {
  const Impl& im = *impl_;
  const double slack = 1e-9 * std::max(1.0, im.t1 - im.t0);
  if (t < im.t0 - slack || t > im.t1 + slack) {
    throw ValidationError("VelocitySource: query time " + std::to_string(t) +
                          " outside span [" + std::to_string(im.t0) + ", " +
                          std::to_string(im.t1) + "]");
  }
  const double tc = std::min(std::max(t, im.t0), im.t1);

  VectorField u;
  if (im.analytic_fn) {
    u = im.analytic_fn(tc);
    require_same_grid(u.grid, im.grid, "VelocitySource::at");
    require_finite(u.x, "VelocitySource::at (x)");
    require_finite(u.y, "VelocitySource::at (y)");
  } else {
    const Trajectory& traj = *im.traj;
    const double s = (tc - im.t0) / traj.dt;
    std::size_t k = static_cast<std::size_t>(std::floor(s));
    if (k >= traj.snapshots.size() - 1) k = traj.snapshots.size() - 2;
    const double theta = std::min(std::max(s - static_cast<double>(k), 0.0), 1.0);
    const VectorField ua = im.recovered(k);
    if (theta == 0.0) {
      u = ua;
    } else {
      const VectorField ub = im.recovered(k + 1);
      u = VectorField(im.grid, tc);
      for (std::size_t idx = 0; idx < u.x.size(); ++idx) {
        u.x[idx] = (1.0 - theta) * ua.x[idx] + theta * ub.x[idx];
        u.y[idx] = (1.0 - theta) * ua.y[idx] + theta * ub.y[idx];
      }
    }
  }
  u.time = tc;

  bool check = false;
  {
    std::lock_guard<std::mutex> lock(im.mutex);
    if (im.checks_left > 0) {
      --im.checks_left;
      check = true;
    }
  }
  if (check) {
    const double div = biot_savart::divergence_l2(u);
    const double scale = std::max(lp_norm(u, 2.0), 1e-12);
    if (div > 1e-10 * scale * (2.0 * M_PI / im.grid.h())) {
      // Compare against the derivative scale: div carries one extra kappa.
      throw ValidationError("VelocitySource: sampled field is not "
                            "divergence-free (relative " +
                            std::to_string(div / scale) + ")");
    }
  }
  return u;
}

const Grid& VelocitySource::grid() const { return impl_->grid; }
const std::string& VelocitySource::name() const { return impl_->name; }
double VelocitySource::t0() const { return impl_->t0; }
double VelocitySource::t1() const { return impl_->t1; }

}  // namespace vortexlab

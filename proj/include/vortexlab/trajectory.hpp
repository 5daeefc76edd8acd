#pragma once

#include <string>
#include <vector>

#include "vortexlab/field.hpp"

namespace vortexlab {

/// Per-snapshot scalar diagnostics recorded during a run.
struct DiagnosticsSeries {
  double p = 1.5;  // the tracked Lp exponent besides 1, 2, inf
  std::vector<double> time;
  std::vector<double> l1;
  std::vector<double> lp;
  std::vector<double> l2;
  std::vector<double> linf;
  std::vector<double> energy;  // 0.5 * ||u||_2^2, spectral
};

/// A completed run: every step's state (stride 1 in memory; persistence may
/// thin), uniform time mesh, diagnostics. `role` is "ns", "transport" or
/// "dual"; dual trajectories are indexed by forward time like the others.
struct Trajectory {
  Grid grid;
  std::string role;
  double nu = 0.0;
  double dt = 0.0;
  std::vector<ScalarField> snapshots;
  DiagnosticsSeries diag;

  std::size_t steps() const {
    return snapshots.empty() ? 0 : snapshots.size() - 1;
  }
  double t0() const { return snapshots.empty() ? 0.0 : snapshots.front().time; }
  double t_final() const {
    return snapshots.empty() ? 0.0 : snapshots.back().time;
  }
  const ScalarField& front() const { return snapshots.front(); }
  const ScalarField& back() const { return snapshots.back(); }

  /// True when snapshots sit on the uniform mesh t0 + k*dt with no gaps.
  bool is_stride_one() const;
};

/// Fills diag from the stored snapshots (norms + spectral energy).
void compute_diagnostics(Trajectory& traj, double p);

/// Persists a run directory: manifest.json plus VRT1 snapshots thinned to
/// `stride` (the final snapshot is always kept). Deterministic output.
void save_trajectory(const Trajectory& traj, const std::string& dir,
                     std::uint32_t stride = 1);

/// Loads a run directory written by save_trajectory.
Trajectory load_trajectory(const std::string& dir);

}  // namespace vortexlab

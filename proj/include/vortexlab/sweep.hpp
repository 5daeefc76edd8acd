#pragma once

#include <string>
#include <vector>

#include "vortexlab/config.hpp"
#include "vortexlab/report.hpp"
#include "vortexlab/trajectory.hpp"

namespace vortexlab {

struct NsRunResult {
  double dt = 0.0;
  double delta = 0.0;
  Trajectory trajectory;
};

/// One viscous run from a config: builds the datum, applies the smoothing
/// schedule, resolves dt, runs forward. When out_dir is non-empty the run
/// directory (manifest + snapshots at the configured stride) and a small
/// run report land there.
NsRunResult run_ns(const NsRunConfig& config, const std::string& out_dir);

/// The full viscosity sweep. Per viscosity: viscous run, zero-viscosity
/// advected comparison run driven by the recovered velocity, the dual bank
/// (three localized sources by exact step transposition plus one
/// terminal-mass solve), norm/renormalization diagnostics. Afterwards the
/// cross-viscosity tables: time-integrated local-Lp velocity Cauchy
/// distances for consecutive viscosities with a least-squares rate, and the
/// weak pairing drift table. Runs are reported by descending viscosity.
/// workers_override > 0 replaces config.workers. When out_dir is non-empty,
/// run directories and report.json are written beneath it.
SweepReport run_sweep(const SweepConfig& config, const std::string& out_dir,
                      std::size_t workers_override = 0);

/// The duality-identity subset of the sweep (viscous runs plus dual bank,
/// none of the comparison or table work). Nothing is persisted.
SweepReport dual_check(const SweepConfig& config);

/// Deep renormalization tables for a completed sweep directory: full drift
/// series per composition function, superlevel-measure ladders, and the
/// complete pairing matrices, written to <sweep_dir>/renorm.json. Needs the
/// run directories that run_sweep persists.
void renorm_deep_report(const SweepConfig& config,
                        const std::string& sweep_dir);

/// Least-squares slope of log(distance) against log(sqrt(nu_high * nu_low))
/// over the table rows. Needs at least two rows, positive throughout.
double cauchy_rate_fit(const std::vector<CauchyPair>& pairs);

}  // namespace vortexlab

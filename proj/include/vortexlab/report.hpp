#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vortexlab/trajectory.hpp"

namespace vortexlab {

/// One backward dual solve paired against its forward run.
struct DualReport {
  std::string source;       // chi bank entry, or "terminal_mass" (chi == 0)
  bool chi_zero = false;
  double pairing = 0.0;
  double boundary = 0.0;
  double residual = 0.0;
  double scale = 0.0;
  double max_ratio_l2 = 0.0;
  double max_ratio_lq = 0.0;
  double mass_drift = 0.0;
};

struct LpMonotonicity {
  double p = 0.0;
  double max_rise_factor = 0.0;  // max_k ||w_{k+1}||_p / ||w_k||_p
};

struct BetaDriftReport {
  std::string beta;
  double ns_max_abs = 0.0;         // max_k |int beta(omega_k) - int beta(omega_0)|
  double transport_max_abs = 0.0;  // same along the advected comparison run
};

/// Everything recorded for one viscosity.
struct RunReport {
  double nu = 0.0;
  double dt = 0.0;
  double delta = 0.0;  // datum smoothing scale used
  std::size_t steps = 0;
  DiagnosticsSeries diag;
  std::vector<LpMonotonicity> lp_monotonicity;
  double convex_rise = 0.0;     // largest uphill move of the quadratic integral
  double convex_initial = 0.0;  // its value at t = 0 (scale for the rise)
  double growth_ratio_max = 0.0;
  std::vector<BetaDriftReport> beta_drift;
  double terminal_transport_distance_l1 = 0.0;  // local ball, vs advected run
  std::vector<DualReport> duals;
  std::vector<double> pairing_integrated;  // per test, bank order
};

struct CauchyPair {
  double nu_high = 0.0;
  double nu_low = 0.0;
  double distance = 0.0;  // time-integrated local-Lp velocity distance
};

struct PairingDriftPair {
  double nu_high = 0.0;
  double nu_low = 0.0;
  std::vector<double> per_test;
  double max_abs = 0.0;
};

struct KernelSplitReport {
  double radius = 0.0;
  double inner_l1 = 0.0;
  double outer_sup = 0.0;
};

/// Full sweep artifact. Runs are ordered by descending viscosity; the
/// Cauchy and drift tables pair consecutive rows.
struct SweepReport {
  std::string config_canonical;  // full resolved config echo (JSON text)
  std::string config_hash;       // FNV-1a of the echo, hex
  double q = 2.0;
  double diag_p = 1.5;
  double center_x = 0.0;
  double center_y = 0.0;
  double ball_radius = 0.0;
  double chi_width = 0.0;
  std::vector<std::string> pairing_names;
  std::vector<KernelSplitReport> kernel_split;
  std::vector<RunReport> runs;
  std::vector<CauchyPair> cauchy;
  double cauchy_rate = 0.0;
  std::vector<PairingDriftPair> pairing_drift;
};

/// Deterministic JSON document for the report (byte-stable across reruns
/// of the same config).
std::string report_to_json(const SweepReport& report);

/// Inverse of report_to_json (every double round-trips exactly).
SweepReport report_from_json(const std::string& text);

/// Writes the report into `dir`: format "json" emits report.json, "csv"
/// emits a flat bundle (runs, lp_monotonicity, duals, diag, cauchy,
/// pairings, pairing_drift, beta_drift, kernel_split, summary .csv files).
/// Both modes also write config.echo.json. Any other format is rejected.
void export_report(const SweepReport& report, const std::string& format,
                   const std::string& dir);

}  // namespace vortexlab

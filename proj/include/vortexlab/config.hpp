#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vortexlab/grid.hpp"
#include "vortexlab/initial_data.hpp"

namespace vortexlab {

struct GridConfig {
  std::uint32_t n = 128;
  double side_length = 25.132741228718345;  // 8 pi
  double dealias_fraction = 2.0 / 3.0;
};

/// Time step selection. `fixed` uses `value` verbatim (must divide t_final);
/// `cfl` derives dt from the advective limit cfl_fraction * h / max|u| with
/// a safety divisor, rounds the step count up so dt divides t_final exactly,
/// and never takes fewer than min_steps steps.
struct DtPolicy {
  enum class Mode { fixed, cfl };
  Mode mode = Mode::cfl;
  double value = 0.0;
  double cfl_fraction = 0.5;
  double safety = 2.0;
  std::size_t min_steps = 200;
};

double resolve_dt(const DtPolicy& policy, double umax, double h,
                  double t_final);

/// Datum smoothing scale per viscosity: sqrt_nu picks
/// delta = scale * sqrt(nu) * side_length, which keeps the smallest-nu run
/// resolved on the default grids; fixed uses delta verbatim.
struct MollifySchedule {
  enum class Mode { sqrt_nu, fixed };
  Mode mode = Mode::sqrt_nu;
  double scale = 1.0;
  double delta = 0.0;

  double delta_for(double nu, double side_length) const;
};

/// One viscous run (the run-ns entry point).
struct NsRunConfig {
  GridConfig grid;
  InitialDatumSpec datum;
  double nu = 0.01;
  double t_final = 1.0;
  DtPolicy dt;
  MollifySchedule mollify;
  double diag_p = 1.5;
  std::uint32_t snapshot_stride = 1;
};

/// The viscosity sweep (run-sweep / renorm-report entry point).
struct SweepConfig {
  GridConfig grid;
  InitialDatumSpec datum;
  std::vector<double> nus = {0.04, 0.02, 0.01, 0.005};
  double t_final = 1.0;
  DtPolicy dt;
  MollifySchedule mollify;
  double q = 2.0;              // dual exponent
  double chi_width = 0.0;      // dual source spatial width; 0 -> side/10
  double diag_p = 1.5;
  std::vector<double> lp_family = {1.0, 1.5, 2.0};
  double ball_radius = 0.0;    // local comparison ball; 0 -> datum support
                               // for compact data, side/4 otherwise
  std::uint32_t snapshot_stride = 1;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
};

/// Strict JSON parsing: unknown keys are rejected, types are checked, and
/// every numeric constraint the structs document is validated. Throws
/// ValidationError (exit code 2 at the CLI).
NsRunConfig parse_ns_config(const std::string& json_text);
SweepConfig parse_sweep_config(const std::string& json_text);

/// Deterministic full echo of a resolved config (every default made
/// explicit, fixed key order). Reports embed this text and its hash.
std::string canonical_text(const NsRunConfig& config);
std::string canonical_text(const SweepConfig& config);

/// FNV-1a 64-bit over a canonical text.
std::uint64_t config_hash(const std::string& canonical);
std::string hash_hex(std::uint64_t value);

Grid make_grid(const GridConfig& config);

}  // namespace vortexlab

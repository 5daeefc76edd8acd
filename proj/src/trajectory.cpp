#include "vortexlab/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include <nlohmann/json.hpp>

#include "vortexlab/errors.hpp"
#include "vortexlab/json_writer.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/snapshot.hpp"
#include "vortexlab/spectral.hpp"

namespace vortexlab {

namespace fs = std::filesystem;
using nlohmann::json;

bool Trajectory::is_stride_one() const {
  if (snapshots.size() < 2 || !(dt > 0.0)) return false;
  const double start = snapshots.front().time;
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    const double expect = start + static_cast<double>(k) * dt;
    if (std::fabs(snapshots[k].time - expect) > 1e-9 * std::max(1.0, dt)) {
      return false;
    }
  }
  return true;
}

namespace {

double spectral_energy(const ScalarField& omega) {
  // 0.5 * ||u||_2^2 via Parseval: 0.5 * L^2 * sum |omega_hat|^2 / kappa^2.
  const Spectrum s = spectral::forward(omega);
  const Grid& g = omega.grid;
  const std::uint32_t n = g.n_points;
  const double two_pi_over_L = 2.0 * M_PI / g.side_length;
  double sum = 0.0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const int k1 = wavenumber(i, n);
    for (std::uint32_t j = 0; j < n; ++j) {
      const int k2 = wavenumber(j, n);
      if (k1 == 0 && k2 == 0) continue;
      const double kappa2 = two_pi_over_L * two_pi_over_L *
                            static_cast<double>(k1 * k1 + k2 * k2);
      sum += std::norm(s.coeffs[g.idx(i, j)]) / kappa2;
    }
  }
  const double L = g.side_length;
  return 0.5 * L * L * sum;
}

std::string snap_name(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06zu.vrt", k);
  return buf;
}

}  // namespace

void compute_diagnostics(Trajectory& traj, double p) {
  DiagnosticsSeries d;
  d.p = p;
  for (const ScalarField& w : traj.snapshots) {
    d.time.push_back(w.time);
    d.l1.push_back(lp_norm(w, 1.0));
    d.lp.push_back(lp_norm(w, p));
    d.l2.push_back(lp_norm(w, 2.0));
    d.linf.push_back(max_abs(w));
    d.energy.push_back(spectral_energy(w));
  }
  traj.diag = std::move(d);
}

void save_trajectory(const Trajectory& traj, const std::string& dir,
                     std::uint32_t stride) {
  if (traj.snapshots.empty()) {
    throw ValidationError("save_trajectory: empty trajectory");
  }
  if (stride == 0) stride = 1;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("save_trajectory: cannot create " + dir);

  std::vector<std::size_t> kept;
  for (std::size_t k = 0; k < traj.snapshots.size(); k += stride) {
    kept.push_back(k);
  }
  if (kept.back() != traj.snapshots.size() - 1) {
    kept.push_back(traj.snapshots.size() - 1);
  }

  jsonw::Writer w;
  w.begin_object();
  w.kv("schema", "vortexlab-run-1");
  w.kv("role", traj.role);
  w.key("grid");
  w.begin_object();
  w.kv("n_points", traj.grid.n_points);
  w.kv("side_length", traj.grid.side_length);
  w.kv("dealias_fraction", traj.grid.dealias_fraction);
  w.end_object();
  w.kv("nu", traj.nu);
  w.kv("dt", traj.dt);
  w.kv("t0", traj.t0());
  w.kv("t_final", traj.t_final());
  w.kv("snapshot_stride", static_cast<std::uint64_t>(stride));
  w.key("snapshots");
  w.begin_array();
  for (std::size_t k : kept) {
    w.begin_object();
    w.kv("file", snap_name(k));
    w.kv("step", static_cast<std::uint64_t>(k));
    w.kv("time", traj.snapshots[k].time);
    w.end_object();
  }
  w.end_array();
  w.key("diagnostics");
  w.begin_object();
  w.kv("p", traj.diag.p);
  w.array("time", traj.diag.time);
  w.array("l1", traj.diag.l1);
  w.array("lp", traj.diag.lp);
  w.array("l2", traj.diag.l2);
  w.array("linf", traj.diag.linf);
  w.array("energy", traj.diag.energy);
  w.end_object();
  w.end_object();
  jsonw::write_text_file((fs::path(dir) / "manifest.json").string(), w.str());

  for (std::size_t k : kept) {
    snapshot::save(traj.snapshots[k], (fs::path(dir) / snap_name(k)).string());
  }
}

Trajectory load_trajectory(const std::string& dir) {
  const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
  json m;
  try {
    m = json::parse(jsonw::read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw IoError("load_trajectory: bad manifest " + manifest_path + ": " +
                  e.what());
  }
  try {
    if (m.at("schema").get<std::string>() != "vortexlab-run-1") {
      throw IoError("load_trajectory: unknown schema in " + manifest_path);
    }
    Trajectory traj;
    traj.role = m.at("role").get<std::string>();
    traj.nu = m.at("nu").get<double>();
    traj.dt = m.at("dt").get<double>();
    const auto& g = m.at("grid");
    traj.grid = make_grid(g.at("n_points").get<std::uint32_t>(),
                          g.at("side_length").get<double>(),
                          g.at("dealias_fraction").get<double>());
    for (const auto& snap : m.at("snapshots")) {
      const std::string file = snap.at("file").get<std::string>();
      ScalarField f = snapshot::load_scalar((fs::path(dir) / file).string(),
                                            traj.grid.dealias_fraction);
      require_same_grid(f.grid, traj.grid, "load_trajectory");
      traj.snapshots.push_back(std::move(f));
    }
    if (m.contains("diagnostics")) {
      const auto& d = m.at("diagnostics");
      traj.diag.p = d.at("p").get<double>();
      traj.diag.time = d.at("time").get<std::vector<double>>();
      traj.diag.l1 = d.at("l1").get<std::vector<double>>();
      traj.diag.lp = d.at("lp").get<std::vector<double>>();
      traj.diag.l2 = d.at("l2").get<std::vector<double>>();
      traj.diag.linf = d.at("linf").get<std::vector<double>>();
      traj.diag.energy = d.at("energy").get<std::vector<double>>();
    }
    return traj;
  } catch (const json::exception& e) {
    throw IoError("load_trajectory: manifest field error in " + manifest_path +
                  ": " + e.what());
  }
}

}  // namespace vortexlab

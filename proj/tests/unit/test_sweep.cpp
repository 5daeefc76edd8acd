#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/config.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/initial_data.hpp"
#include "vortexlab/json_writer.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/report.hpp"
#include "vortexlab/spectral.hpp"
#include "vortexlab/sweep.hpp"
#include "vortexlab/trajectory.hpp"

using namespace vortexlab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  return jsonw::read_text_file(p.string());
}

SweepConfig mini_tg_sweep() {
  SweepConfig c;
  c.grid.n = 32;
  c.grid.side_length = 2.0 * M_PI;
  c.datum.kind = DatumKind::taylor_green;
  c.datum.amplitude = 1.0;
  c.nus = {0.04, 0.02, 0.01};
  c.t_final = 0.5;
  c.dt.mode = DtPolicy::Mode::fixed;
  c.dt.value = 0.01;
  c.mollify.mode = MollifySchedule::Mode::fixed;
  c.mollify.delta = 0.0;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("rate fit recovers an exact power law") {
  std::vector<CauchyPair> pairs;
  for (double nu : {0.04, 0.02, 0.01}) {
    pairs.push_back({nu, nu, 10.0 * nu});  // distance ~ nu^1
  }
  CHECK(cauchy_rate_fit(pairs) == doctest::Approx(1.0).epsilon(1e-12));

  for (CauchyPair& p : pairs) p.distance = std::sqrt(p.nu_high) * 0.3;
  CHECK(cauchy_rate_fit(pairs) == doctest::Approx(0.5).epsilon(1e-12));

  for (CauchyPair& p : pairs) p.distance = 7.25;
  CHECK(cauchy_rate_fit(pairs) == doctest::Approx(0.0));

  CHECK_THROWS_AS(cauchy_rate_fit({{0.01, 0.01, 1.0}}), ValidationError);
  CHECK_THROWS_AS(cauchy_rate_fit({{0.01, 0.01, 1.0}, {0.02, 0.02, 0.0}}),
                  ValidationError);
  CHECK_THROWS_AS(cauchy_rate_fit({{0.01, 0.01, 1.0}, {0.01, 0.01, 2.0}}),
                  ValidationError);  // identical abscissae
}

TEST_CASE("time step policy resolves as documented") {
  DtPolicy fixed;
  fixed.mode = DtPolicy::Mode::fixed;
  fixed.value = 0.02;
  CHECK(resolve_dt(fixed, 3.0, 0.1, 1.0) == 0.02);
  fixed.value = 0.03;  // does not divide 1.0
  CHECK_THROWS_AS(resolve_dt(fixed, 3.0, 0.1, 1.0), ValidationError);

  DtPolicy cfl;  // defaults: cfl_fraction 0.5, safety 2, min_steps 200
  SUBCASE("fast flow sets the step from the velocity") {
    const double umax = 40.0;
    const double h = 0.1;
    const double T = 1.0;
    const double dt = resolve_dt(cfl, umax, h, T);
    // steps >= T * safety * umax / (cfl * h) = 1600.
    CHECK(T / dt >= 1600.0);
    CHECK(dt * std::llround(T / dt) == doctest::Approx(T).epsilon(1e-12));
    CHECK(dt <= 0.5 * h / umax);
  }
  SUBCASE("slow flow falls back to the step floor") {
    const double dt = resolve_dt(cfl, 1e-6, 0.1, 1.0);
    CHECK(dt == doctest::Approx(1.0 / 200.0));
  }
  SUBCASE("still flow uses the floor too") {
    const double dt = resolve_dt(cfl, 0.0, 0.1, 1.0);
    CHECK(dt == doctest::Approx(1.0 / 200.0));
  }
}

TEST_CASE("smoothing schedule scales with the square root of viscosity") {
  MollifySchedule m;  // sqrt_nu, scale 1: delta = sqrt(nu) * side_length
  CHECK(m.delta_for(0.04, 10.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m.delta_for(0.0, 10.0) == 0.0);
  m.scale = 2.5;
  CHECK(m.delta_for(0.01, 4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(m.delta_for(-0.01, 4.0), ValidationError);

  MollifySchedule f;
  f.mode = MollifySchedule::Mode::fixed;
  f.delta = 0.125;
  CHECK(f.delta_for(0.04, 10.0) == 0.125);
  CHECK(f.delta_for(1.0, 10.0) == 0.125);
}

TEST_CASE("config parsing is strict and round-trips canonically") {
  const std::string text = R"({
    "grid": {"n": 64, "side_length": 12.0},
    "datum": {"kind": "taylor_green", "amplitude": 2.0},
    "nus": [0.03, 0.015],
    "t_final": 0.75,
    "dt": {"mode": "fixed", "value": 0.0025},
    "dual": {"q": 3.0, "chi_width": 1.1},
    "diagnostics": {"p": 1.25, "lp_family": [1.0, 2.0], "ball_radius": 2.0},
    "workers": 2,
    "seed": 9
  })";
  const SweepConfig c = parse_sweep_config(text);
  CHECK(c.grid.n == 64);
  CHECK(c.grid.side_length == 12.0);
  CHECK(c.datum.kind == DatumKind::taylor_green);
  CHECK(c.nus.size() == 2);
  CHECK(c.q == 3.0);
  CHECK(c.chi_width == 1.1);
  CHECK(c.diag_p == 1.25);
  CHECK(c.ball_radius == 2.0);
  CHECK(c.workers == 2);
  CHECK(c.seed == 9);
  CHECK(c.datum.seed == 9);  // top-level seed reaches the datum

  // The canonical echo parses back to the same canonical echo.
  const std::string canon = canonical_text(c);
  const SweepConfig again = parse_sweep_config(canon);
  CHECK(canonical_text(again) == canon);
  CHECK(config_hash(canon) == config_hash(canonical_text(again)));
  CHECK(hash_hex(config_hash(canon)).size() == 16);

  CHECK_THROWS_AS(parse_sweep_config("{\"grid\": {\"n\": 64}, \"nope\": 1}"),
                  ValidationError);
  CHECK_THROWS_AS(parse_sweep_config("{\"dual\": {\"q\": 1.5}}"),
                  ValidationError);
  CHECK_THROWS_AS(parse_sweep_config("{\"nus\": []}"), ValidationError);
  CHECK_THROWS_AS(parse_sweep_config("not json"), ValidationError);
  CHECK_THROWS_AS(parse_sweep_config("{\"t_final\": -1}"), ValidationError);

  const std::string ns_text = R"({
    "grid": {"n": 32, "side_length": 6.0},
    "datum": {"kind": "custom_modes", "seed": 4},
    "nu": 0.02,
    "t_final": 0.5,
    "dt": {"mode": "fixed", "value": 0.005}
  })";
  const NsRunConfig nc = parse_ns_config(ns_text);
  CHECK(nc.nu == 0.02);
  CHECK(nc.datum.seed == 4);
  const std::string ncanon = canonical_text(nc);
  CHECK(canonical_text(parse_ns_config(ncanon)) == ncanon);
  CHECK_THROWS_AS(parse_ns_config("{\"nu\": -0.5}"), ValidationError);
}

TEST_CASE("cellular sweep matches the closed-form Cauchy distances") {
  const SweepConfig cfg = mini_tg_sweep();
  const SweepReport report = run_sweep(cfg, "");

  REQUIRE(report.runs.size() == 3);
  // Descending viscosity order.
  CHECK(report.runs[0].nu == 0.04);
  CHECK(report.runs[1].nu == 0.02);
  CHECK(report.runs[2].nu == 0.01);

  // All duality rows hold at the acceptance tolerance.
  for (const RunReport& run : report.runs) {
    REQUIRE(run.duals.size() == 4);
    for (const DualReport& d : run.duals) {
      CHECK(d.residual <= 1e-10 * d.scale);
      CHECK(d.max_ratio_l2 <= 1.1);
      CHECK(d.max_ratio_lq <= 1.1);
    }
    for (const LpMonotonicity& m : run.lp_monotonicity) {
      CHECK(m.max_rise_factor <= 1.0 + 1e-8);
    }
    CHECK(run.convex_rise <= 1e-8 * std::max(1.0, run.convex_initial));
  }

  // The cellular state decays as exp(-2 nu t) exactly, so the recovered
  // velocity does too, and every Cauchy entry has a closed form:
  // dist(nu1, nu2) = ||u0||_{Lp(ball)} * sum_k c_k dt |e^{-2 nu1 t} - ...|.
  const Grid g = make_grid(cfg.grid);
  const ScalarField w0 = make_rough_datum(g, cfg.datum);
  const VectorField u0 = biot_savart::velocity_from_vorticity(w0);
  const VectorField zero(g, 0.0);
  const double L = g.side_length;
  const double unorm =
      local_lp_distance(u0, zero, report.diag_p, L / 2.0, L / 2.0, L / 4.0);

  REQUIRE(report.cauchy.size() == 2);
  const double dt = report.runs[0].dt;
  const std::size_t K = report.runs[0].steps;
  for (const CauchyPair& pair : report.cauchy) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double c_k = (k == 0 || k == K) ? 0.5 : 1.0;
      sum += c_k * dt *
             std::fabs(std::exp(-2.0 * pair.nu_high * t) -
                       std::exp(-2.0 * pair.nu_low * t));
    }
    const double want = unorm * sum;
    CHECK(pair.distance == doctest::Approx(want).epsilon(1e-9));
  }

  // Rate fit on those numbers is reproducible from the table itself.
  std::vector<CauchyPair> usable;
  for (const CauchyPair& p : report.cauchy) usable.push_back(p);
  CHECK(report.cauchy_rate == doctest::Approx(cauchy_rate_fit(usable)));

  CHECK(report.pairing_drift.size() == 2);
  CHECK(report.kernel_split.size() == 2);
  CHECK(report.kernel_split[0].inner_l1 == 1.0);
}

TEST_CASE("sweep artifacts round-trip through disk byte for byte") {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "vortexlab_sweep_test";
  fs::remove_all(base);

  SweepConfig cfg = mini_tg_sweep();
  cfg.nus = {0.02, 0.01};
  cfg.t_final = 0.2;
  cfg.dt.value = 0.01;

  const fs::path dir1 = base / "a";
  const fs::path dir2 = base / "b";
  const SweepReport r1 = run_sweep(cfg, dir1.string());
  const SweepReport r2 = run_sweep(cfg, dir2.string());

  // Identical inputs, identical bytes.
  CHECK(slurp(dir1 / "report.json") == slurp(dir2 / "report.json"));
  CHECK(slurp(dir1 / "config.echo.json") == slurp(dir2 / "config.echo.json"));

  // report.json parses back into an equivalent report that re-exports to
  // the same bytes.
  const SweepReport parsed = report_from_json(slurp(dir1 / "report.json"));
  const fs::path dir3 = base / "c";
  export_report(parsed, "json", dir3.string());
  CHECK(slurp(dir3 / "report.json") == slurp(dir1 / "report.json"));

  // CSV export is deterministic as well.
  const fs::path csv1 = base / "csv1";
  const fs::path csv2 = base / "csv2";
  export_report(r1, "csv", csv1.string());
  export_report(parsed, "csv", csv2.string());
  for (const char* name :
       {"runs.csv", "duals.csv", "diag.csv", "cauchy.csv", "pairings.csv",
        "pairing_drift.csv", "beta_drift.csv", "kernel_split.csv",
        "lp_monotonicity.csv", "summary.csv"}) {
    CHECK(slurp(csv1 / name) == slurp(csv2 / name));
  }
  CHECK_THROWS_AS(export_report(r1, "xml", (base / "x").string()),
                  ValidationError);

  // Persisted run directories reload into the original trajectories.
  const Trajectory ns = load_trajectory((dir1 / "runs/nu_000/ns").string());
  CHECK(ns.nu == 0.02);
  CHECK(ns.snapshots.size() == static_cast<std::size_t>(r1.runs[0].steps) + 1);
  CHECK(ns.is_stride_one());
  const Trajectory tr =
      load_trajectory((dir1 / "runs/nu_000/transport").string());
  CHECK(tr.nu == 0.0);
  CHECK(tr.snapshots.size() == ns.snapshots.size());

  // Snapshots reload bit for bit.
  const Grid g = make_grid(cfg.grid);
  const ScalarField w0 = make_rough_datum(g, cfg.datum);
  Spectrum s0 = spectral::forward(w0);
  spectral::dealias_in_place(s0);
  const ScalarField projected = spectral::inverse(s0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(ns.snapshots.front().values[k] == projected.values[k]);
  }

  fs::remove_all(base);
}

TEST_CASE("dual check covers the bank without the comparison work") {
  SweepConfig cfg = mini_tg_sweep();
  cfg.nus = {0.02};
  cfg.t_final = 0.2;
  const SweepReport report = dual_check(cfg);
  REQUIRE(report.runs.size() == 1);
  CHECK(report.runs[0].duals.size() == 4);
  CHECK(report.cauchy.empty());
  CHECK(report.pairing_drift.empty());
  CHECK(report.runs[0].lp_monotonicity.empty());
  for (const DualReport& d : report.runs[0].duals) {
    CHECK(d.residual <= 1e-10 * d.scale);
  }
  // Source labels: the three windowed bumps plus the terminal-mass solve.
  CHECK(report.runs[0].duals[0].source == "chi_early_center");
  CHECK(report.runs[0].duals[3].source == "terminal_mass");
  CHECK(report.runs[0].duals[3].chi_zero);
}

TEST_CASE("single runs persist a reloadable record") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "vortexlab_ns_test";
  fs::remove_all(dir);

  NsRunConfig cfg;
  cfg.grid.n = 32;
  cfg.grid.side_length = 2.0 * M_PI;
  cfg.datum.kind = DatumKind::taylor_green;
  cfg.nu = 0.05;
  cfg.t_final = 0.2;
  cfg.dt.mode = DtPolicy::Mode::fixed;
  cfg.dt.value = 0.01;
  cfg.mollify.mode = MollifySchedule::Mode::fixed;
  cfg.mollify.delta = 0.0;
  cfg.snapshot_stride = 4;

  const NsRunResult res = run_ns(cfg, dir.string());
  CHECK(res.dt == 0.01);
  CHECK(res.delta == 0.0);
  CHECK(res.trajectory.steps() == 20);

  const Trajectory back = load_trajectory((dir / "ns").string());
  // Stride 4 keeps snapshots 0, 4, ..., 20: six states.
  CHECK(back.snapshots.size() == 6);
  CHECK(back.back().time == doctest::Approx(0.2));
  for (std::size_t k = 0; k < back.snapshots.front().values.size(); ++k) {
    CHECK(back.snapshots.front().values[k] ==
          res.trajectory.snapshots.front().values[k]);
    CHECK(back.back().values[k] == res.trajectory.back().values[k]);
  }
  fs::remove_all(dir);
}

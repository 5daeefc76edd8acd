#include "vortexlab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/dual_solver.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/initial_data.hpp"
#include "vortexlab/json_writer.hpp"
#include "vortexlab/log.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/ns_solver.hpp"
#include "vortexlab/renorm.hpp"
#include "vortexlab/sources.hpp"
#include "vortexlab/velocity_source.hpp"

namespace vortexlab {

namespace {

struct Geometry {
  Grid grid;
  double cx = 0.0;
  double cy = 0.0;
  double ball_radius = 0.0;
  double chi_width = 0.0;
};

Geometry resolve_geometry(const GridConfig& gc, const InitialDatumSpec& datum,
                          double ball_radius, double chi_width) {
  Geometry g;
  g.grid = make_grid(gc);
  const double L = g.grid.side_length;
  g.cx = datum.center_x;
  g.cy = datum.center_y;
  if (g.cx == 0.0 && g.cy == 0.0) {
    g.cx = L / 2.0;
    g.cy = L / 2.0;
  }
  // Default comparison ball: the datum's own support for compact data (the
  // region the local convergence statements are about), a quarter domain
  // otherwise. Balls that straddle the smoothing halo annulus instead pick
  // up a transient re-concentration and read non-monotone at coarse nu.
  const bool compact = datum.kind == DatumKind::power_singularity ||
                       datum.kind == DatumKind::vortex_patch;
  g.ball_radius = ball_radius > 0.0 ? ball_radius
                 : compact          ? datum.support_radius
                                    : L / 4.0;
  g.chi_width = chi_width > 0.0 ? chi_width : L / 10.0;
  return g;
}

double umax_of(const ScalarField& omega) {
  return max_magnitude(biot_savart::velocity_from_vorticity(omega));
}

void emit_diag(jsonw::Writer& w, const DiagnosticsSeries& diag) {
  w.key("diag").begin_object();
  w.kv("p", diag.p);
  w.array("time", diag.time);
  w.array("l1", diag.l1);
  w.array("lp", diag.lp);
  w.array("l2", diag.l2);
  w.array("linf", diag.linf);
  w.array("energy", diag.energy);
  w.end_object();
}

std::string run_dir_tag(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "nu_%03zu", index);
  return buf;
}

// Everything the per-viscosity jobs share read-only.
struct SweepContext {
  SweepConfig config;
  Geometry geo;
  ScalarField omega0;  // unsmoothed datum
  double dt = 0.0;     // one mesh for the whole sweep (cross-run tables)
  std::vector<SpaceTimeSource> chi_bank;
  ScalarField phi_terminal;
  std::vector<BetaFunction> beta_bank;
  std::vector<TestFunction> test_bank;
  std::string out_dir;
  bool duals_only = false;
};

struct PerNuResult {
  RunReport report;
  std::shared_ptr<const Trajectory> ns;
  ScalarField transport_terminal;
};

void run_one_nu(const SweepContext& ctx, std::size_t index, double nu,
                PerNuResult& slot) {
  const SweepConfig& c = ctx.config;
  const Geometry& geo = ctx.geo;
  const double T = c.t_final;
  const double delta = c.mollify.delta_for(nu, geo.grid.side_length);
  const ScalarField datum = mollify(ctx.omega0, delta);

  SolverConfig sc;
  sc.nu = nu;
  sc.dt = ctx.dt;
  sc.t_final = T;
  sc.cfl_fraction = c.dt.cfl_fraction;
  sc.diag_p = c.diag_p;
  auto ns = std::make_shared<Trajectory>(run_forward(datum, sc));

  RunReport& rep = slot.report;
  rep.nu = nu;
  rep.dt = ctx.dt;
  rep.delta = delta;
  rep.steps = ns->steps();
  rep.diag = ns->diag;

  // Dual bank: the three localized sources by exact step transposition,
  // then the terminal-mass solve (zero source, bump terminal datum).
  const SpaceTimeSource zero_chi = SpaceTimeSource::zero(geo.grid);
  DualConfig dc;
  dc.nu = nu;
  dc.dt = ctx.dt;
  dc.t0 = 0.0;
  dc.t_final = T;
  dc.q = c.q;
  dc.cfl_fraction = c.dt.cfl_fraction;
  const ForwardStepperSpec replay = ForwardStepperSpec::ns_replay(ns.get());
  const auto record_dual = [&](const SpaceTimeSource& chi,
                               const ScalarField* phi_T,
                               const std::string& label, bool chi_zero) {
    const Trajectory dual = dual_backward_adjoint(dc, replay, chi, phi_T);
    const DualityResult dr = duality_residual(*ns, dual, chi, phi_T);
    const EnvelopeReport env = dual_envelopes(dual, chi, phi_T, c.q);
    DualReport out;
    out.source = label;
    out.chi_zero = chi_zero;
    out.pairing = dr.pairing;
    out.boundary = dr.boundary;
    out.residual = dr.residual;
    out.scale = dr.scale;
    out.max_ratio_l2 = env.max_ratio_l2;
    out.max_ratio_lq = env.max_ratio_lq;
    out.mass_drift = env.mass_drift;
    rep.duals.push_back(std::move(out));
  };
  for (const SpaceTimeSource& chi : ctx.chi_bank) {
    record_dual(chi, nullptr, chi.name(), false);
  }
  record_dual(zero_chi, &ctx.phi_terminal, "terminal_mass", true);

  if (ctx.duals_only) {
    slot.ns = std::move(ns);
    return;
  }

  // Zero-viscosity advected comparison run along the recovered velocity.
  // It carries the rough datum itself, not the smoothed one the viscous
  // run starts from: the comparison distance then contains both the
  // smoothing gap and the diffusion gap, and both shrink with nu.
  const VelocitySource vel = VelocitySource::from_trajectory(ns);
  const Trajectory transport =
      transport_forward(ctx.omega0, vel, ctx.dt, T, 0.0, c.dt.cfl_fraction);

  for (double p : c.lp_family) {
    LpMonotonicity mono;
    mono.p = p;
    double prev = lp_norm(ns->snapshots.front(), p);
    for (std::size_t k = 1; k < ns->snapshots.size(); ++k) {
      const double cur = lp_norm(ns->snapshots[k], p);
      if (prev > 0.0) {
        mono.max_rise_factor = std::max(mono.max_rise_factor, cur / prev);
      }
      prev = cur;
    }
    rep.lp_monotonicity.push_back(mono);
  }

  const BetaFunction quad = BetaFunction::power_convex(2.0);
  rep.convex_rise = dissipation_rise(*ns, quad);
  rep.convex_initial = beta_integral(ns->snapshots.front(), quad);

  const std::size_t K = ns->steps();
  for (std::size_t k : {std::size_t{0}, K / 2, K}) {
    const VectorField u = biot_savart::velocity_from_vorticity(ns->snapshots[k]);
    rep.growth_ratio_max = std::max(
        rep.growth_ratio_max, biot_savart::growth_ratio(u, geo.cx, geo.cy));
  }

  for (const BetaFunction& beta : ctx.beta_bank) {
    BetaDriftReport bd;
    bd.beta = beta.name;
    for (double d : renorm_drift(*ns, beta)) {
      bd.ns_max_abs = std::max(bd.ns_max_abs, std::fabs(d));
    }
    for (double d : renorm_drift(transport, beta)) {
      bd.transport_max_abs = std::max(bd.transport_max_abs, std::fabs(d));
    }
    rep.beta_drift.push_back(std::move(bd));
  }

  rep.terminal_transport_distance_l1 =
      local_lp_distance(ns->back(), transport.back(), 1.0, geo.cx, geo.cy,
                        geo.ball_radius);

  const PairingTable pairs = weak_star_pairings(*ns, ctx.test_bank);
  rep.pairing_integrated = pairs.integrated;

  if (!ctx.out_dir.empty()) {
    const std::string base = ctx.out_dir + "/runs/" + run_dir_tag(index);
    save_trajectory(*ns, base + "/ns", c.snapshot_stride);
    save_trajectory(transport, base + "/transport", c.snapshot_stride);
  }

  slot.transport_terminal = transport.back();
  slot.ns = std::move(ns);
}

void run_all(const SweepContext& ctx, const std::vector<double>& nus_desc,
             std::vector<PerNuResult>& slots, std::size_t workers) {
  slots.resize(nus_desc.size());
  if (workers <= 1 || nus_desc.size() <= 1) {
    for (std::size_t i = 0; i < nus_desc.size(); ++i) {
      run_one_nu(ctx, i, nus_desc[i], slots[i]);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::size_t count = std::min(workers, nus_desc.size());
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= nus_desc.size()) return;
        try {
          run_one_nu(ctx, i, nus_desc[i], slots[i]);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

SweepReport assemble(const SweepContext& ctx,
                     const std::vector<double>& nus_desc,
                     std::vector<PerNuResult>& slots) {
  const SweepConfig& c = ctx.config;
  SweepReport report;
  report.config_canonical = canonical_text(c);
  report.config_hash = hash_hex(config_hash(report.config_canonical));
  report.q = c.q;
  report.diag_p = c.diag_p;
  report.center_x = ctx.geo.cx;
  report.center_y = ctx.geo.cy;
  report.ball_radius = ctx.geo.ball_radius;
  report.chi_width = ctx.geo.chi_width;
  for (const TestFunction& t : ctx.test_bank) {
    report.pairing_names.push_back(t.name);
  }
  for (double r : {1.0, 2.0}) {
    const biot_savart::KernelSplit ks = biot_savart::kernel_split_norms(r);
    report.kernel_split.push_back({r, ks.inner_l1, ks.outer_sup});
  }
  for (PerNuResult& s : slots) report.runs.push_back(std::move(s.report));

  if (ctx.duals_only) return report;

  // Cross-viscosity tables on the shared mesh: time-integrated local-Lp
  // velocity distances for consecutive rows, and the pairing drift.
  for (std::size_t i = 0; i + 1 < slots.size(); ++i) {
    const Trajectory& a = *slots[i].ns;
    const Trajectory& b = *slots[i + 1].ns;
    if (a.snapshots.size() != b.snapshots.size()) {
      throw NumericalError("run_sweep: runs fell off the shared time mesh");
    }
    const std::size_t K = a.steps();
    double acc = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      const double c_k = (k == 0 || k == K) ? 0.5 : 1.0;
      const VectorField ua =
          biot_savart::velocity_from_vorticity(a.snapshots[k]);
      const VectorField ub =
          biot_savart::velocity_from_vorticity(b.snapshots[k]);
      acc += c_k * ctx.dt *
             local_lp_distance(ua, ub, c.diag_p, ctx.geo.cx, ctx.geo.cy,
                               ctx.geo.ball_radius);
    }
    report.cauchy.push_back({nus_desc[i], nus_desc[i + 1], acc});

    PairingDriftPair drift;
    drift.nu_high = nus_desc[i];
    drift.nu_low = nus_desc[i + 1];
    const std::vector<double>& hi = report.runs[i].pairing_integrated;
    const std::vector<double>& lo = report.runs[i + 1].pairing_integrated;
    for (std::size_t j = 0; j < hi.size() && j < lo.size(); ++j) {
      const double d = std::fabs(hi[j] - lo[j]);
      drift.per_test.push_back(d);
      drift.max_abs = std::max(drift.max_abs, d);
    }
    report.pairing_drift.push_back(std::move(drift));
  }

  std::vector<CauchyPair> usable;
  for (const CauchyPair& p : report.cauchy) {
    if (p.distance > 0.0 && p.nu_high > 0.0 && p.nu_low > 0.0) {
      usable.push_back(p);
    }
  }
  if (usable.size() >= 2) {
    report.cauchy_rate = cauchy_rate_fit(usable);
  } else {
    report.cauchy_rate = 0.0;
    if (!report.cauchy.empty()) {
      log::warn("run_sweep: too few usable pairs for a Cauchy rate fit");
    }
  }
  return report;
}

SweepReport sweep_impl(const SweepConfig& config, const std::string& out_dir,
                       std::size_t workers_override, bool duals_only) {
  SweepContext ctx;
  ctx.config = config;
  ctx.geo = resolve_geometry(config.grid, config.datum, config.ball_radius,
                             config.chi_width);
  ctx.omega0 = make_rough_datum(ctx.geo.grid, ctx.config.datum);
  ctx.dt = resolve_dt(config.dt, umax_of(ctx.omega0), ctx.geo.grid.h(),
                      config.t_final);
  ctx.chi_bank = default_chi_bank(ctx.geo.grid, config.t_final, ctx.geo.cx,
                                  ctx.geo.cy, ctx.geo.chi_width);
  ctx.phi_terminal =
      tensor_bump(ctx.geo.grid, ctx.geo.cx, ctx.geo.cy, ctx.geo.chi_width);
  ctx.phi_terminal.time = config.t_final;
  ctx.beta_bank = default_beta_bank(max_abs(ctx.omega0));
  ctx.test_bank = default_test_bank(ctx.geo.grid);
  ctx.out_dir = out_dir;
  ctx.duals_only = duals_only;

  std::vector<double> nus_desc = config.nus;
  std::sort(nus_desc.begin(), nus_desc.end(), std::greater<double>());

  const std::size_t workers =
      workers_override > 0 ? workers_override : config.workers;
  std::vector<PerNuResult> slots;
  run_all(ctx, nus_desc, slots, workers);
  SweepReport report = assemble(ctx, nus_desc, slots);

  if (!out_dir.empty()) {
    export_report(report, "json", out_dir);
  }
  log::info("sweep finished: " + std::to_string(report.runs.size()) +
            " viscosities, shared dt = " + std::to_string(ctx.dt));
  return report;
}

}  // namespace

double cauchy_rate_fit(const std::vector<CauchyPair>& pairs) {
  if (pairs.size() < 2) {
    throw ValidationError("cauchy_rate_fit: need at least two pairs");
  }
  std::vector<double> xs, ys;
  xs.reserve(pairs.size());
  ys.reserve(pairs.size());
  for (const CauchyPair& p : pairs) {
    if (!(p.nu_high > 0.0) || !(p.nu_low > 0.0) || !(p.distance > 0.0)) {
      throw ValidationError(
          "cauchy_rate_fit: viscosities and distances must be positive");
    }
    xs.push_back(0.5 * (std::log(p.nu_high) + std::log(p.nu_low)));
    ys.push_back(std::log(p.distance));
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx <= 0.0) {
    throw ValidationError(
        "cauchy_rate_fit: degenerate abscissae (identical viscosities)");
  }
  return sxy / sxx;
}

NsRunResult run_ns(const NsRunConfig& config, const std::string& out_dir) {
  const Grid grid = make_grid(config.grid);
  const ScalarField omega0 = make_rough_datum(grid, config.datum);
  NsRunResult res;
  res.delta = config.mollify.delta_for(config.nu, grid.side_length);
  const ScalarField datum = mollify(omega0, res.delta);
  res.dt = resolve_dt(config.dt, umax_of(datum), grid.h(), config.t_final);

  SolverConfig sc;
  sc.nu = config.nu;
  sc.dt = res.dt;
  sc.t_final = config.t_final;
  sc.cfl_fraction = config.dt.cfl_fraction;
  sc.diag_p = config.diag_p;
  res.trajectory = run_forward(datum, sc);

  if (!out_dir.empty()) {
    save_trajectory(res.trajectory, out_dir + "/ns", config.snapshot_stride);
    const std::string echo = canonical_text(config);
    jsonw::Writer w;
    w.begin_object();
    w.kv("schema", "vortexlab-ns-1");
    w.kv("config_hash", hash_hex(config_hash(echo)));
    w.kv("config_echo", echo);
    w.kv("nu", config.nu);
    w.kv("dt", res.dt);
    w.kv("delta", res.delta);
    w.kv("steps", static_cast<std::uint64_t>(res.trajectory.steps()));
    emit_diag(w, res.trajectory.diag);
    w.end_object();
    jsonw::write_text_file(out_dir + "/report.json", w.str());
  }
  return res;
}

SweepReport run_sweep(const SweepConfig& config, const std::string& out_dir,
                      std::size_t workers_override) {
  return sweep_impl(config, out_dir, workers_override, false);
}

SweepReport dual_check(const SweepConfig& config) {
  return sweep_impl(config, "", 0, true);
}

void renorm_deep_report(const SweepConfig& config,
                        const std::string& sweep_dir) {
  if (sweep_dir.empty()) {
    throw ValidationError("renorm_deep_report: sweep directory required");
  }
  const Geometry geo = resolve_geometry(config.grid, config.datum,
                                        config.ball_radius, config.chi_width);
  const ScalarField omega0 = make_rough_datum(geo.grid, config.datum);
  const std::vector<BetaFunction> betas = default_beta_bank(max_abs(omega0));
  const std::vector<TestFunction> tests = default_test_bank(geo.grid);

  std::vector<double> nus_desc = config.nus;
  std::sort(nus_desc.begin(), nus_desc.end(), std::greater<double>());

  jsonw::Writer w;
  w.begin_object();
  w.kv("schema", "vortexlab-renorm-1");
  w.key("runs").begin_array();
  for (std::size_t i = 0; i < nus_desc.size(); ++i) {
    const std::string base = sweep_dir + "/runs/" + run_dir_tag(i);
    const Trajectory ns = load_trajectory(base + "/ns");
    const Trajectory transport = load_trajectory(base + "/transport");

    w.begin_object();
    w.kv("nu", ns.nu);
    std::vector<double> times;
    times.reserve(ns.snapshots.size());
    for (const ScalarField& s : ns.snapshots) times.push_back(s.time);
    w.array("time", times);

    w.key("beta_series").begin_array();
    for (const BetaFunction& beta : betas) {
      w.begin_object();
      w.kv("beta", beta.name);
      w.array("ns", renorm_drift(ns, beta));
      w.array("transport", renorm_drift(transport, beta));
      w.end_object();
    }
    w.end_array();

    // Superlevel measure ladder at the first, middle and last stored states.
    const double peak = max_abs(ns.snapshots.front());
    const std::vector<double> lambdas = {0.125 * peak, 0.25 * peak,
                                         0.5 * peak, peak, 2.0 * peak};
    const std::size_t mid = ns.steps() / 2;
    const std::size_t idx[3] = {0, mid, ns.steps()};
    w.key("distribution").begin_object();
    w.array("lambda", lambdas);
    w.key("snapshot_index").begin_array();
    for (std::size_t id : idx) w.value(static_cast<std::uint64_t>(id));
    w.end_array();
    w.key("measure").begin_array();
    for (std::size_t id : idx) {
      w.begin_array();
      for (double lam : lambdas) {
        w.value(distribution_function(ns.snapshots[id], lam));
      }
      w.end_array();
    }
    w.end_array();
    w.end_object();

    const PairingTable table = weak_star_pairings(ns, tests);
    w.key("pairings").begin_object();
    w.key("test_names").begin_array();
    for (const std::string& n : table.test_names) w.value(n);
    w.end_array();
    w.array("integrated", table.integrated);
    w.key("at_time").begin_array();
    for (const std::vector<double>& row : table.at_time) {
      w.begin_array();
      for (double v : row) w.value(v);
      w.end_array();
    }
    w.end_array();
    w.end_object();
    w.end_object();
  }
  w.end_array();
  w.end_object();
  jsonw::write_text_file(sweep_dir + "/renorm.json", w.str());
  log::info("renorm_deep_report: wrote " + sweep_dir + "/renorm.json");
}

}  // namespace vortexlab

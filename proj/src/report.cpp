#include "vortexlab/report.hpp"

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vortexlab/errors.hpp"
#include "vortexlab/json_writer.hpp"

namespace vortexlab {

using nlohmann::json;

std::string report_to_json(const SweepReport& r) {
  jsonw::Writer w;
  w.begin_object();
  w.kv("schema", "vortexlab-sweep-1");
  w.kv("config_hash", r.config_hash);
  w.kv("config_echo", r.config_canonical);
  w.kv("q", r.q);
  w.kv("diag_p", r.diag_p);
  w.kv("center_x", r.center_x);
  w.kv("center_y", r.center_y);
  w.kv("ball_radius", r.ball_radius);
  w.kv("chi_width", r.chi_width);
  w.key("pairing_names").begin_array();
  for (const std::string& n : r.pairing_names) w.value(n);
  w.end_array();
  w.key("kernel_split").begin_array();
  for (const KernelSplitReport& k : r.kernel_split) {
    w.begin_object();
    w.kv("radius", k.radius);
    w.kv("inner_l1", k.inner_l1);
    w.kv("outer_sup", k.outer_sup);
    w.end_object();
  }
  w.end_array();
  w.key("runs").begin_array();
  for (const RunReport& run : r.runs) {
    w.begin_object();
    w.kv("nu", run.nu);
    w.kv("dt", run.dt);
    w.kv("steps", static_cast<std::uint64_t>(run.steps));
    w.kv("delta", run.delta);
    w.key("diag").begin_object();
    w.kv("p", run.diag.p);
    w.array("time", run.diag.time);
    w.array("l1", run.diag.l1);
    w.array("lp", run.diag.lp);
    w.array("l2", run.diag.l2);
    w.array("linf", run.diag.linf);
    w.array("energy", run.diag.energy);
    w.end_object();
    w.key("lp_monotonicity").begin_array();
    for (const LpMonotonicity& m : run.lp_monotonicity) {
      w.begin_object();
      w.kv("p", m.p);
      w.kv("max_rise_factor", m.max_rise_factor);
      w.end_object();
    }
    w.end_array();
    w.kv("convex_rise", run.convex_rise);
    w.kv("convex_initial", run.convex_initial);
    w.kv("growth_ratio_max", run.growth_ratio_max);
    w.key("beta_drift").begin_array();
    for (const BetaDriftReport& b : run.beta_drift) {
      w.begin_object();
      w.kv("beta", b.beta);
      w.kv("ns_max_abs", b.ns_max_abs);
      w.kv("transport_max_abs", b.transport_max_abs);
      w.end_object();
    }
    w.end_array();
    w.kv("terminal_transport_distance_l1", run.terminal_transport_distance_l1);
    w.key("duals").begin_array();
    for (const DualReport& d : run.duals) {
      w.begin_object();
      w.kv("source", d.source);
      w.kv("chi_zero", d.chi_zero);
      w.kv("pairing", d.pairing);
      w.kv("boundary", d.boundary);
      w.kv("residual", d.residual);
      w.kv("scale", d.scale);
      w.kv("max_ratio_l2", d.max_ratio_l2);
      w.kv("max_ratio_lq", d.max_ratio_lq);
      w.kv("mass_drift", d.mass_drift);
      w.end_object();
    }
    w.end_array();
    w.array("pairing_integrated", run.pairing_integrated);
    w.end_object();
  }
  w.end_array();
  w.key("cauchy").begin_array();
  for (const CauchyPair& c : r.cauchy) {
    w.begin_object();
    w.kv("nu_high", c.nu_high);
    w.kv("nu_low", c.nu_low);
    w.kv("distance", c.distance);
    w.end_object();
  }
  w.end_array();
  w.kv("cauchy_rate", r.cauchy_rate);
  w.key("pairing_drift").begin_array();
  for (const PairingDriftPair& p : r.pairing_drift) {
    w.begin_object();
    w.kv("nu_high", p.nu_high);
    w.kv("nu_low", p.nu_low);
    w.kv("max_abs", p.max_abs);
    w.array("per_test", p.per_test);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

namespace {

std::vector<double> doubles_of(const json& arr, const char* what) {
  if (!arr.is_array()) {
    throw ValidationError(std::string("report: ") + what + " must be an array");
  }
  std::vector<double> out;
  out.reserve(arr.size());
  for (const json& e : arr) {
    if (!e.is_number()) {
      throw ValidationError(std::string("report: ") + what +
                            " must hold numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

SweepReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("report: invalid JSON: ") + e.what());
  }
  SweepReport r;
  try {
    if (j.at("schema").get<std::string>() != "vortexlab-sweep-1") {
      throw ValidationError("report: unknown schema");
    }
    r.config_hash = j.at("config_hash").get<std::string>();
    r.config_canonical = j.at("config_echo").get<std::string>();
    r.q = j.at("q").get<double>();
    r.diag_p = j.at("diag_p").get<double>();
    r.center_x = j.at("center_x").get<double>();
    r.center_y = j.at("center_y").get<double>();
    r.ball_radius = j.at("ball_radius").get<double>();
    r.chi_width = j.at("chi_width").get<double>();
    for (const json& n : j.at("pairing_names")) {
      r.pairing_names.push_back(n.get<std::string>());
    }
    for (const json& k : j.at("kernel_split")) {
      KernelSplitReport ks;
      ks.radius = k.at("radius").get<double>();
      ks.inner_l1 = k.at("inner_l1").get<double>();
      ks.outer_sup = k.at("outer_sup").get<double>();
      r.kernel_split.push_back(ks);
    }
    for (const json& jr : j.at("runs")) {
      RunReport run;
      run.nu = jr.at("nu").get<double>();
      run.dt = jr.at("dt").get<double>();
      run.steps = jr.at("steps").get<std::size_t>();
      run.delta = jr.at("delta").get<double>();
      const json& d = jr.at("diag");
      run.diag.p = d.at("p").get<double>();
      run.diag.time = doubles_of(d.at("time"), "diag.time");
      run.diag.l1 = doubles_of(d.at("l1"), "diag.l1");
      run.diag.lp = doubles_of(d.at("lp"), "diag.lp");
      run.diag.l2 = doubles_of(d.at("l2"), "diag.l2");
      run.diag.linf = doubles_of(d.at("linf"), "diag.linf");
      run.diag.energy = doubles_of(d.at("energy"), "diag.energy");
      for (const json& m : jr.at("lp_monotonicity")) {
        run.lp_monotonicity.push_back(
            {m.at("p").get<double>(), m.at("max_rise_factor").get<double>()});
      }
      run.convex_rise = jr.at("convex_rise").get<double>();
      run.convex_initial = jr.at("convex_initial").get<double>();
      run.growth_ratio_max = jr.at("growth_ratio_max").get<double>();
      for (const json& b : jr.at("beta_drift")) {
        BetaDriftReport bd;
        bd.beta = b.at("beta").get<std::string>();
        bd.ns_max_abs = b.at("ns_max_abs").get<double>();
        bd.transport_max_abs = b.at("transport_max_abs").get<double>();
        run.beta_drift.push_back(std::move(bd));
      }
      run.terminal_transport_distance_l1 =
          jr.at("terminal_transport_distance_l1").get<double>();
      for (const json& jd : jr.at("duals")) {
        DualReport dr;
        dr.source = jd.at("source").get<std::string>();
        dr.chi_zero = jd.at("chi_zero").get<bool>();
        dr.pairing = jd.at("pairing").get<double>();
        dr.boundary = jd.at("boundary").get<double>();
        dr.residual = jd.at("residual").get<double>();
        dr.scale = jd.at("scale").get<double>();
        dr.max_ratio_l2 = jd.at("max_ratio_l2").get<double>();
        dr.max_ratio_lq = jd.at("max_ratio_lq").get<double>();
        dr.mass_drift = jd.at("mass_drift").get<double>();
        run.duals.push_back(std::move(dr));
      }
      run.pairing_integrated =
          doubles_of(jr.at("pairing_integrated"), "pairing_integrated");
      r.runs.push_back(std::move(run));
    }
    for (const json& c : j.at("cauchy")) {
      r.cauchy.push_back({c.at("nu_high").get<double>(),
                          c.at("nu_low").get<double>(),
                          c.at("distance").get<double>()});
    }
    r.cauchy_rate = j.at("cauchy_rate").get<double>();
    for (const json& p : j.at("pairing_drift")) {
      PairingDriftPair pd;
      pd.nu_high = p.at("nu_high").get<double>();
      pd.nu_low = p.at("nu_low").get<double>();
      pd.max_abs = p.at("max_abs").get<double>();
      pd.per_test = doubles_of(p.at("per_test"), "pairing_drift.per_test");
      r.pairing_drift.push_back(std::move(pd));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: malformed document: ") +
                          e.what());
  }
  return r;
}

namespace {

std::string fd(double v) { return jsonw::format_double(v); }

std::string runs_csv(const SweepReport& r) {
  std::string out =
      "nu,dt,steps,delta,convex_rise,convex_initial,growth_ratio_max,"
      "terminal_transport_distance_l1\n";
  for (const RunReport& run : r.runs) {
    out += fd(run.nu) + "," + fd(run.dt) + "," + std::to_string(run.steps) +
           "," + fd(run.delta) + "," + fd(run.convex_rise) + "," +
           fd(run.convex_initial) + "," + fd(run.growth_ratio_max) + "," +
           fd(run.terminal_transport_distance_l1) + "\n";
  }
  return out;
}

std::string lp_monotonicity_csv(const SweepReport& r) {
  std::string out = "nu,p,max_rise_factor\n";
  for (const RunReport& run : r.runs) {
    for (const LpMonotonicity& m : run.lp_monotonicity) {
      out += fd(run.nu) + "," + fd(m.p) + "," + fd(m.max_rise_factor) + "\n";
    }
  }
  return out;
}

std::string duals_csv(const SweepReport& r) {
  std::string out =
      "nu,source,chi_zero,pairing,boundary,residual,scale,max_ratio_l2,"
      "max_ratio_lq,mass_drift\n";
  for (const RunReport& run : r.runs) {
    for (const DualReport& d : run.duals) {
      out += fd(run.nu) + "," + d.source + "," +
             (d.chi_zero ? "1" : "0") + "," + fd(d.pairing) + "," +
             fd(d.boundary) + "," + fd(d.residual) + "," + fd(d.scale) + "," +
             fd(d.max_ratio_l2) + "," + fd(d.max_ratio_lq) + "," +
             fd(d.mass_drift) + "\n";
    }
  }
  return out;
}

std::string diag_csv(const SweepReport& r) {
  std::string out = "nu,index,time,l1,lp,l2,linf,energy\n";
  for (const RunReport& run : r.runs) {
    for (std::size_t k = 0; k < run.diag.time.size(); ++k) {
      out += fd(run.nu) + "," + std::to_string(k) + "," +
             fd(run.diag.time[k]) + "," + fd(run.diag.l1[k]) + "," +
             fd(run.diag.lp[k]) + "," + fd(run.diag.l2[k]) + "," +
             fd(run.diag.linf[k]) + "," + fd(run.diag.energy[k]) + "\n";
    }
  }
  return out;
}

std::string cauchy_csv(const SweepReport& r) {
  std::string out = "nu_high,nu_low,distance\n";
  for (const CauchyPair& c : r.cauchy) {
    out += fd(c.nu_high) + "," + fd(c.nu_low) + "," + fd(c.distance) + "\n";
  }
  return out;
}

std::string pairings_csv(const SweepReport& r) {
  std::string out = "nu,test,integrated\n";
  for (const RunReport& run : r.runs) {
    for (std::size_t j = 0; j < run.pairing_integrated.size(); ++j) {
      const std::string& name =
          j < r.pairing_names.size() ? r.pairing_names[j] : "test";
      out += fd(run.nu) + "," + name + "," + fd(run.pairing_integrated[j]) +
             "\n";
    }
  }
  return out;
}

std::string pairing_drift_csv(const SweepReport& r) {
  std::string out = "nu_high,nu_low,test,abs_drift\n";
  for (const PairingDriftPair& p : r.pairing_drift) {
    for (std::size_t j = 0; j < p.per_test.size(); ++j) {
      const std::string& name =
          j < r.pairing_names.size() ? r.pairing_names[j] : "test";
      out += fd(p.nu_high) + "," + fd(p.nu_low) + "," + name + "," +
             fd(p.per_test[j]) + "\n";
    }
  }
  return out;
}

std::string beta_drift_csv(const SweepReport& r) {
  std::string out = "nu,beta,ns_max_abs,transport_max_abs\n";
  for (const RunReport& run : r.runs) {
    for (const BetaDriftReport& b : run.beta_drift) {
      out += fd(run.nu) + "," + b.beta + "," + fd(b.ns_max_abs) + "," +
             fd(b.transport_max_abs) + "\n";
    }
  }
  return out;
}

std::string kernel_split_csv(const SweepReport& r) {
  std::string out = "radius,inner_l1,outer_sup\n";
  for (const KernelSplitReport& k : r.kernel_split) {
    out += fd(k.radius) + "," + fd(k.inner_l1) + "," + fd(k.outer_sup) + "\n";
  }
  return out;
}

std::string summary_csv(const SweepReport& r) {
  std::string out = "key,value\n";
  out += "config_hash," + r.config_hash + "\n";
  out += "q," + fd(r.q) + "\n";
  out += "diag_p," + fd(r.diag_p) + "\n";
  out += "center_x," + fd(r.center_x) + "\n";
  out += "center_y," + fd(r.center_y) + "\n";
  out += "ball_radius," + fd(r.ball_radius) + "\n";
  out += "chi_width," + fd(r.chi_width) + "\n";
  out += "cauchy_rate," + fd(r.cauchy_rate) + "\n";
  out += "runs," + std::to_string(r.runs.size()) + "\n";
  return out;
}

}  // namespace

void export_report(const SweepReport& report, const std::string& format,
                   const std::string& dir) {
  if (format != "json" && format != "csv") {
    throw ValidationError("export: format must be 'json' or 'csv', got '" +
                          format + "'");
  }
  if (dir.empty()) throw ValidationError("export: output directory required");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("export: cannot create " + dir + ": " + ec.message());
  }
  jsonw::write_text_file(dir + "/config.echo.json", report.config_canonical);
  if (format == "json") {
    jsonw::write_text_file(dir + "/report.json", report_to_json(report));
    return;
  }
  jsonw::write_text_file(dir + "/runs.csv", runs_csv(report));
  jsonw::write_text_file(dir + "/lp_monotonicity.csv",
                         lp_monotonicity_csv(report));
  jsonw::write_text_file(dir + "/duals.csv", duals_csv(report));
  jsonw::write_text_file(dir + "/diag.csv", diag_csv(report));
  jsonw::write_text_file(dir + "/cauchy.csv", cauchy_csv(report));
  jsonw::write_text_file(dir + "/pairings.csv", pairings_csv(report));
  jsonw::write_text_file(dir + "/pairing_drift.csv", pairing_drift_csv(report));
  jsonw::write_text_file(dir + "/beta_drift.csv", beta_drift_csv(report));
  jsonw::write_text_file(dir + "/kernel_split.csv", kernel_split_csv(report));
  jsonw::write_text_file(dir + "/summary.csv", summary_csv(report));
}

}  // namespace vortexlab

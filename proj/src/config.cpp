#include "vortexlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "vortexlab/errors.hpp"
#include "vortexlab/json_writer.hpp"
#include "vortexlab/ns_solver.hpp"

namespace vortexlab {

using nlohmann::json;

namespace {

json parse_top(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) {
    throw ValidationError(std::string(what) + ": top level must be an object");
  }
  return j;
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(std::string("config: unknown key '") + it.key() +
                            "' in " + where);
    }
  }
}

const json* maybe(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number_or(const json& obj, const char* key, double fallback,
                 const char* where) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) {
    throw ValidationError(std::string("config: ") + where + "." + key +
                          " must be a number");
  }
  return v->get<double>();
}

std::uint64_t unsigned_or(const json& obj, const char* key,
                          std::uint64_t fallback, const char* where) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_number_unsigned()) {
    throw ValidationError(std::string("config: ") + where + "." + key +
                          " must be a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

std::string string_or(const json& obj, const char* key,
                      const std::string& fallback, const char* where) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) {
    throw ValidationError(std::string("config: ") + where + "." + key +
                          " must be a string");
  }
  return v->get<std::string>();
}

std::vector<double> numbers_or(const json& obj, const char* key,
                               std::vector<double> fallback,
                               const char* where) {
  const json* v = maybe(obj, key);
  if (!v) return fallback;
  if (!v->is_array()) {
    throw ValidationError(std::string("config: ") + where + "." + key +
                          " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v->size());
  for (const json& e : *v) {
    if (!e.is_number()) {
      throw ValidationError(std::string("config: ") + where + "." + key +
                            " must be an array of numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

GridConfig grid_from(const json& top) {
  GridConfig gc;
  const json* g = maybe(top, "grid");
  if (!g) return gc;
  if (!g->is_object()) throw ValidationError("config: grid must be an object");
  require_keys(*g, {"n", "side_length", "dealias_fraction"}, "grid");
  gc.n = static_cast<std::uint32_t>(
      unsigned_or(*g, "n", gc.n, "grid"));
  gc.side_length = number_or(*g, "side_length", gc.side_length, "grid");
  gc.dealias_fraction =
      number_or(*g, "dealias_fraction", gc.dealias_fraction, "grid");
  return gc;
}

InitialDatumSpec datum_from(const json& top) {
  InitialDatumSpec spec;
  const json* d = maybe(top, "datum");
  if (!d) return spec;
  if (!d->is_object()) throw ValidationError("config: datum must be an object");
  require_keys(*d,
               {"kind", "p", "gamma", "support_radius", "center_x", "center_y",
                "amplitude", "seed"},
               "datum");
  spec.kind = datum_kind_from_string(
      string_or(*d, "kind", to_string(spec.kind), "datum"));
  spec.p = number_or(*d, "p", spec.p, "datum");
  spec.gamma = number_or(*d, "gamma", spec.gamma, "datum");
  spec.support_radius =
      number_or(*d, "support_radius", spec.support_radius, "datum");
  spec.center_x = number_or(*d, "center_x", spec.center_x, "datum");
  spec.center_y = number_or(*d, "center_y", spec.center_y, "datum");
  spec.amplitude = number_or(*d, "amplitude", spec.amplitude, "datum");
  spec.seed = unsigned_or(*d, "seed", spec.seed, "datum");
  return spec;
}

DtPolicy dt_from(const json& top) {
  DtPolicy p;
  const json* d = maybe(top, "dt");
  if (!d) return p;
  if (!d->is_object()) throw ValidationError("config: dt must be an object");
  require_keys(*d, {"mode", "value", "cfl_fraction", "safety", "min_steps"},
               "dt");
  const std::string mode = string_or(*d, "mode", "cfl", "dt");
  if (mode == "fixed") {
    p.mode = DtPolicy::Mode::fixed;
  } else if (mode == "cfl") {
    p.mode = DtPolicy::Mode::cfl;
  } else {
    throw ValidationError("config: dt.mode must be 'fixed' or 'cfl'");
  }
  p.value = number_or(*d, "value", p.value, "dt");
  p.cfl_fraction = number_or(*d, "cfl_fraction", p.cfl_fraction, "dt");
  p.safety = number_or(*d, "safety", p.safety, "dt");
  p.min_steps = static_cast<std::size_t>(
      unsigned_or(*d, "min_steps", p.min_steps, "dt"));
  if (p.mode == DtPolicy::Mode::fixed && !(p.value > 0.0)) {
    throw ValidationError("config: dt.value must be > 0 in fixed mode");
  }
  if (!(p.cfl_fraction > 0.0) || p.cfl_fraction > 1.0) {
    throw ValidationError("config: dt.cfl_fraction must lie in (0, 1]");
  }
  if (!(p.safety >= 1.0)) {
    throw ValidationError("config: dt.safety must be >= 1");
  }
  if (p.min_steps == 0) {
    throw ValidationError("config: dt.min_steps must be >= 1");
  }
  return p;
}

MollifySchedule mollify_from(const json& top) {
  MollifySchedule m;
  const json* d = maybe(top, "mollify");
  if (!d) return m;
  if (!d->is_object()) {
    throw ValidationError("config: mollify must be an object");
  }
  require_keys(*d, {"mode", "scale", "delta"}, "mollify");
  const std::string mode = string_or(*d, "mode", "sqrt_nu", "mollify");
  if (mode == "sqrt_nu") {
    m.mode = MollifySchedule::Mode::sqrt_nu;
  } else if (mode == "fixed") {
    m.mode = MollifySchedule::Mode::fixed;
  } else {
    throw ValidationError("config: mollify.mode must be 'sqrt_nu' or 'fixed'");
  }
  m.scale = number_or(*d, "scale", m.scale, "mollify");
  m.delta = number_or(*d, "delta", m.delta, "mollify");
  if (std::isnan(m.scale) || m.scale < 0.0 || std::isnan(m.delta) ||
      m.delta < 0.0) {
    throw ValidationError("config: mollify.scale and .delta must be >= 0");
  }
  return m;
}

void validate_common(const GridConfig& grid, double t_final) {
  (void)vortexlab::make_grid(grid.n, grid.side_length, grid.dealias_fraction);
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw ValidationError("config: t_final must be positive and finite");
  }
}

}  // namespace

double MollifySchedule::delta_for(double nu, double side_length) const {
  if (std::isnan(nu) || nu < 0.0) {
    throw ValidationError("mollify schedule: nu must be >= 0");
  }
  if (!(side_length > 0.0)) {
    throw ValidationError("mollify schedule: side_length must be positive");
  }
  return mode == Mode::fixed ? delta : scale * std::sqrt(nu) * side_length;
}

double resolve_dt(const DtPolicy& policy, double umax, double h,
                  double t_final) {
  if (!(h > 0.0) || !(t_final > 0.0)) {
    throw ValidationError("resolve_dt: h and t_final must be positive");
  }
  if (std::isnan(umax) || umax < 0.0) {
    throw ValidationError("resolve_dt: umax must be >= 0");
  }
  if (policy.mode == DtPolicy::Mode::fixed) {
    if (!(policy.value > 0.0)) {
      throw ValidationError("resolve_dt: fixed mode needs value > 0");
    }
    (void)step_count(policy.value, t_final);
    return policy.value;
  }
  double steps_real = 1.0;
  if (umax > 0.0) {
    steps_real = t_final * policy.safety * umax / (policy.cfl_fraction * h);
  }
  if (!std::isfinite(steps_real)) {
    throw NumericalError("resolve_dt: advective limit overflowed");
  }
  std::size_t steps = static_cast<std::size_t>(std::ceil(steps_real));
  if (steps < policy.min_steps) steps = policy.min_steps;
  return t_final / static_cast<double>(steps);
}

NsRunConfig parse_ns_config(const std::string& json_text) {
  const json top = parse_top(json_text, "ns config");
  require_keys(top,
               {"grid", "datum", "nu", "t_final", "dt", "mollify",
                "diagnostics", "snapshot_stride"},
               "ns config");
  NsRunConfig c;
  c.grid = grid_from(top);
  c.datum = datum_from(top);
  c.nu = number_or(top, "nu", c.nu, "ns config");
  c.t_final = number_or(top, "t_final", c.t_final, "ns config");
  c.dt = dt_from(top);
  c.mollify = mollify_from(top);
  if (const json* d = maybe(top, "diagnostics")) {
    if (!d->is_object()) {
      throw ValidationError("config: diagnostics must be an object");
    }
    require_keys(*d, {"p"}, "diagnostics");
    c.diag_p = number_or(*d, "p", c.diag_p, "diagnostics");
  }
  c.snapshot_stride = static_cast<std::uint32_t>(unsigned_or(
      top, "snapshot_stride", c.snapshot_stride, "ns config"));
  validate_common(c.grid, c.t_final);
  if (std::isnan(c.nu) || c.nu < 0.0) {
    throw ValidationError("config: nu must be >= 0");
  }
  if (!(c.diag_p >= 1.0)) {
    throw ValidationError("config: diagnostics.p must be >= 1");
  }
  if (c.snapshot_stride == 0) {
    throw ValidationError("config: snapshot_stride must be >= 1");
  }
  return c;
}

SweepConfig parse_sweep_config(const std::string& json_text) {
  const json top = parse_top(json_text, "sweep config");
  require_keys(top,
               {"grid", "datum", "nus", "t_final", "dt", "mollify", "dual",
                "diagnostics", "snapshot_stride", "workers", "seed"},
               "sweep config");
  SweepConfig c;
  c.grid = grid_from(top);
  c.datum = datum_from(top);
  c.nus = numbers_or(top, "nus", c.nus, "sweep config");
  c.t_final = number_or(top, "t_final", c.t_final, "sweep config");
  c.dt = dt_from(top);
  c.mollify = mollify_from(top);
  if (const json* d = maybe(top, "dual")) {
    if (!d->is_object()) throw ValidationError("config: dual must be an object");
    require_keys(*d, {"q", "chi_width"}, "dual");
    c.q = number_or(*d, "q", c.q, "dual");
    c.chi_width = number_or(*d, "chi_width", c.chi_width, "dual");
  }
  if (const json* d = maybe(top, "diagnostics")) {
    if (!d->is_object()) {
      throw ValidationError("config: diagnostics must be an object");
    }
    require_keys(*d, {"p", "lp_family", "ball_radius"}, "diagnostics");
    c.diag_p = number_or(*d, "p", c.diag_p, "diagnostics");
    c.lp_family = numbers_or(*d, "lp_family", c.lp_family, "diagnostics");
    c.ball_radius = number_or(*d, "ball_radius", c.ball_radius, "diagnostics");
  }
  c.snapshot_stride = static_cast<std::uint32_t>(unsigned_or(
      top, "snapshot_stride", c.snapshot_stride, "sweep config"));
  c.workers = static_cast<std::size_t>(
      unsigned_or(top, "workers", c.workers, "sweep config"));
  c.seed = unsigned_or(top, "seed", c.seed, "sweep config");
  if (maybe(top, "seed") != nullptr) {
    c.datum.seed = c.seed;  // top-level shorthand, same knob as --seed
  }

  validate_common(c.grid, c.t_final);
  if (c.nus.empty()) {
    throw ValidationError("config: nus must list at least one viscosity");
  }
  for (double nu : c.nus) {
    if (std::isnan(nu) || nu < 0.0 || !std::isfinite(nu)) {
      throw ValidationError("config: every viscosity must be finite and >= 0");
    }
  }
  if (std::isnan(c.q) || c.q < 2.0) {
    throw ValidationError("config: dual.q must be >= 2");
  }
  if (std::isnan(c.chi_width) || c.chi_width < 0.0 ||
      c.chi_width >= c.grid.side_length / 4.0) {
    throw ValidationError(
        "config: dual.chi_width must lie in [0, side_length/4)");
  }
  if (!(c.diag_p >= 1.0)) {
    throw ValidationError("config: diagnostics.p must be >= 1");
  }
  if (c.lp_family.empty()) {
    throw ValidationError("config: diagnostics.lp_family must be non-empty");
  }
  for (double p : c.lp_family) {
    if (std::isnan(p) || p < 1.0) {
      throw ValidationError("config: every lp_family exponent must be >= 1");
    }
  }
  if (std::isnan(c.ball_radius) || c.ball_radius < 0.0 ||
      c.ball_radius >= c.grid.side_length / 2.0) {
    throw ValidationError(
        "config: diagnostics.ball_radius must lie in [0, side_length/2)");
  }
  if (c.snapshot_stride == 0) {
    throw ValidationError("config: snapshot_stride must be >= 1");
  }
  if (c.workers == 0) {
    throw ValidationError("config: workers must be >= 1");
  }
  return c;
}

namespace {

void emit_grid(jsonw::Writer& w, const GridConfig& g) {
  w.key("grid").begin_object();
  w.kv("n", static_cast<std::uint64_t>(g.n));
  w.kv("side_length", g.side_length);
  w.kv("dealias_fraction", g.dealias_fraction);
  w.end_object();
}

void emit_datum(jsonw::Writer& w, const InitialDatumSpec& d) {
  w.key("datum").begin_object();
  w.kv("kind", to_string(d.kind));
  w.kv("p", d.p);
  w.kv("gamma", d.gamma);
  w.kv("support_radius", d.support_radius);
  w.kv("center_x", d.center_x);
  w.kv("center_y", d.center_y);
  w.kv("amplitude", d.amplitude);
  w.kv("seed", d.seed);
  w.end_object();
}

void emit_dt(jsonw::Writer& w, const DtPolicy& p) {
  w.key("dt").begin_object();
  w.kv("mode", p.mode == DtPolicy::Mode::fixed ? "fixed" : "cfl");
  w.kv("value", p.value);
  w.kv("cfl_fraction", p.cfl_fraction);
  w.kv("safety", p.safety);
  w.kv("min_steps", static_cast<std::uint64_t>(p.min_steps));
  w.end_object();
}

void emit_mollify(jsonw::Writer& w, const MollifySchedule& m) {
  w.key("mollify").begin_object();
  w.kv("mode", m.mode == MollifySchedule::Mode::fixed ? "fixed" : "sqrt_nu");
  w.kv("scale", m.scale);
  w.kv("delta", m.delta);
  w.end_object();
}

}  // namespace

std::string canonical_text(const NsRunConfig& c) {
  jsonw::Writer w;
  w.begin_object();
  emit_grid(w, c.grid);
  emit_datum(w, c.datum);
  w.kv("nu", c.nu);
  w.kv("t_final", c.t_final);
  emit_dt(w, c.dt);
  emit_mollify(w, c.mollify);
  w.key("diagnostics").begin_object();
  w.kv("p", c.diag_p);
  w.end_object();
  w.kv("snapshot_stride", static_cast<std::uint64_t>(c.snapshot_stride));
  w.end_object();
  return w.str();
}

std::string canonical_text(const SweepConfig& c) {
  jsonw::Writer w;
  w.begin_object();
  emit_grid(w, c.grid);
  emit_datum(w, c.datum);
  w.array("nus", c.nus);
  w.kv("t_final", c.t_final);
  emit_dt(w, c.dt);
  emit_mollify(w, c.mollify);
  w.key("dual").begin_object();
  w.kv("q", c.q);
  w.kv("chi_width", c.chi_width);
  w.end_object();
  w.key("diagnostics").begin_object();
  w.kv("p", c.diag_p);
  w.array("lp_family", c.lp_family);
  w.kv("ball_radius", c.ball_radius);
  w.end_object();
  w.kv("snapshot_stride", static_cast<std::uint64_t>(c.snapshot_stride));
  w.kv("workers", static_cast<std::uint64_t>(c.workers));
  w.kv("seed", c.seed);
  w.end_object();
  return w.str();
}

std::uint64_t config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= static_cast<std::uint64_t>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

Grid make_grid(const GridConfig& config) {
  return make_grid(config.n, config.side_length, config.dealias_fraction);
}

}  // namespace vortexlab

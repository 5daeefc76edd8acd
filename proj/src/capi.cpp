#include "vortexlab.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "vortexlab/biot_savart.hpp"
#include "vortexlab/config.hpp"
#include "vortexlab/errors.hpp"
#include "vortexlab/field.hpp"
#include "vortexlab/json_writer.hpp"
#include "vortexlab/norms.hpp"
#include "vortexlab/report.hpp"
#include "vortexlab/snapshot.hpp"
#include "vortexlab/sweep.hpp"

struct vrt_field {
  vortexlab::ScalarField field;
};

namespace jsonw = vortexlab::jsonw;

namespace {

thread_local std::string g_last_error;

vrt_status fail(vrt_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
vrt_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return VRT_OK;
  } catch (const vortexlab::ValidationError& e) {
    return fail(VRT_VALIDATION, e.what());
  } catch (const vortexlab::NumericalError& e) {
    return fail(VRT_NUMERICAL, e.what());
  } catch (const vortexlab::IoError& e) {
    return fail(VRT_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VRT_NUMERICAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VRT_NUMERICAL, e.what());
  } catch (...) {
    return fail(VRT_NUMERICAL, "unknown error");
  }
}

vrt_status require(bool ok, const char* message) {
  return ok ? VRT_OK : fail(VRT_VALIDATION, message);
}

std::string text_of(const char* s) { return s ? std::string(s) : std::string(); }

}  // namespace

extern "C" {

const char* vrt_version(void) { return "0.1.0"; }

const char* vrt_last_error(void) { return g_last_error.c_str(); }

vrt_status vrt_field_create(size_t n, double side_length, double time,
                            const double* values, vrt_field** out) {
  if (vrt_status s = require(out != nullptr, "vrt_field_create: out is NULL"))
    return s;
  *out = nullptr;
  return guarded([&] {
    const vortexlab::Grid grid =
        vortexlab::make_grid(static_cast<std::uint32_t>(n), side_length);
    vortexlab::ScalarField f(grid, time);
    if (values != nullptr) {
      std::memcpy(f.values.data(), values, grid.size() * sizeof(double));
      vortexlab::require_finite(f.values, "vrt_field_create");
    }
    *out = new vrt_field{std::move(f)};
  });
}

vrt_status vrt_field_load(const char* path, vrt_field** out) {
  if (vrt_status s = require(out != nullptr && path != nullptr,
                             "vrt_field_load: NULL argument"))
    return s;
  *out = nullptr;
  return guarded([&] {
    *out = new vrt_field{vortexlab::snapshot::load_scalar(path)};
  });
}

vrt_status vrt_field_save(const vrt_field* field, const char* path) {
  if (vrt_status s = require(field != nullptr && path != nullptr,
                             "vrt_field_save: NULL argument"))
    return s;
  return guarded([&] { vortexlab::snapshot::save(field->field, path); });
}

void vrt_field_destroy(vrt_field* field) { delete field; }

vrt_status vrt_field_info(const vrt_field* field, size_t* n,
                          double* side_length, double* time) {
  if (vrt_status s = require(field != nullptr, "vrt_field_info: field is NULL"))
    return s;
  g_last_error.clear();
  if (n) *n = field->field.grid.n_points;
  if (side_length) *side_length = field->field.grid.side_length;
  if (time) *time = field->field.time;
  return VRT_OK;
}

const double* vrt_field_values(const vrt_field* field) {
  return field ? field->field.values.data() : nullptr;
}

vrt_status vrt_integrate(const vrt_field* field, double* out) {
  if (vrt_status s = require(field != nullptr && out != nullptr,
                             "vrt_integrate: NULL argument"))
    return s;
  return guarded([&] { *out = vortexlab::integrate(field->field); });
}

vrt_status vrt_lp_norm(const vrt_field* field, double p, double* out) {
  if (vrt_status s = require(field != nullptr && out != nullptr,
                             "vrt_lp_norm: NULL argument"))
    return s;
  return guarded([&] { *out = vortexlab::lp_norm(field->field, p); });
}

vrt_status vrt_velocity_from_vorticity(const vrt_field* omega,
                                       vrt_field** out_ux,
                                       vrt_field** out_uy) {
  if (vrt_status s =
          require(omega != nullptr && out_ux != nullptr && out_uy != nullptr,
                  "vrt_velocity_from_vorticity: NULL argument"))
    return s;
  *out_ux = nullptr;
  *out_uy = nullptr;
  return guarded([&] {
    vortexlab::VectorField u =
        vortexlab::biot_savart::velocity_from_vorticity(omega->field);
    vortexlab::ScalarField ux(u.grid, u.time);
    vortexlab::ScalarField uy(u.grid, u.time);
    ux.values = std::move(u.x);
    uy.values = std::move(u.y);
    auto a = std::make_unique<vrt_field>(vrt_field{std::move(ux)});
    auto b = std::make_unique<vrt_field>(vrt_field{std::move(uy)});
    *out_ux = a.release();
    *out_uy = b.release();
  });
}

vrt_status vrt_kernel_split_norms(double radius, double* out_inner_l1,
                                  double* out_outer_sup) {
  if (vrt_status s =
          require(out_inner_l1 != nullptr && out_outer_sup != nullptr,
                  "vrt_kernel_split_norms: NULL argument"))
    return s;
  return guarded([&] {
    const vortexlab::biot_savart::KernelSplit ks =
        vortexlab::biot_savart::kernel_split_norms(radius);
    *out_inner_l1 = ks.inner_l1;
    *out_outer_sup = ks.outer_sup;
  });
}

vrt_status vrt_run_ns(const char* config_path, const char* out_dir,
                      size_t seed) {
  if (vrt_status s = require(config_path != nullptr && out_dir != nullptr &&
                                 out_dir[0] != '\0',
                             "vrt_run_ns: config path and out dir required"))
    return s;
  return guarded([&] {
    vortexlab::NsRunConfig config =
        vortexlab::parse_ns_config(jsonw::read_text_file(config_path));
    if (seed != 0) config.datum.seed = static_cast<std::uint64_t>(seed);
    vortexlab::run_ns(config, out_dir);
  });
}

vrt_status vrt_run_sweep(const char* config_path, const char* out_dir,
                         size_t workers, size_t seed) {
  if (vrt_status s = require(config_path != nullptr && out_dir != nullptr &&
                                 out_dir[0] != '\0',
                             "vrt_run_sweep: config path and out dir required"))
    return s;
  return guarded([&] {
    vortexlab::SweepConfig config =
        vortexlab::parse_sweep_config(jsonw::read_text_file(config_path));
    if (seed != 0) {
      config.seed = static_cast<std::uint64_t>(seed);
      config.datum.seed = config.seed;
    }
    vortexlab::run_sweep(config, out_dir, workers);
  });
}

vrt_status vrt_dual_check(const char* config_path, const char* out_dir,
                          size_t seed) {
  if (vrt_status s = require(config_path != nullptr,
                             "vrt_dual_check: config path required"))
    return s;
  bool all_pass = true;
  const vrt_status run_status = guarded([&] {
    vortexlab::SweepConfig config =
        vortexlab::parse_sweep_config(jsonw::read_text_file(config_path));
    if (seed != 0) {
      config.seed = static_cast<std::uint64_t>(seed);
      config.datum.seed = config.seed;
    }
    const vortexlab::SweepReport report = vortexlab::dual_check(config);

    jsonw::Writer w;
    w.begin_object();
    w.kv("schema", "vortexlab-dual-check-1");
    w.kv("config_hash", report.config_hash);
    w.kv("bound_factor", 1e-10);
    w.key("rows").begin_array();
    for (const vortexlab::RunReport& run : report.runs) {
      for (const vortexlab::DualReport& d : run.duals) {
        const double bound = 1e-10 * d.scale;
        const bool ok = d.residual <= bound;
        all_pass = all_pass && ok;
        w.begin_object();
        w.kv("nu", run.nu);
        w.kv("source", d.source);
        w.kv("residual", d.residual);
        w.kv("scale", d.scale);
        w.kv("bound", bound);
        w.kv("pass", ok);
        w.kv("max_ratio_l2", d.max_ratio_l2);
        w.kv("max_ratio_lq", d.max_ratio_lq);
        w.kv("mass_drift", d.mass_drift);
        w.end_object();
      }
    }
    w.end_array();
    w.kv("pass", all_pass);
    w.end_object();
    const std::string dir = text_of(out_dir);
    if (!dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      if (ec) {
        throw vortexlab::IoError("vrt_dual_check: cannot create " + dir +
                                 ": " + ec.message());
      }
      jsonw::write_text_file(dir + "/dual_check.json", w.str());
    }
  });
  if (run_status != VRT_OK) return run_status;
  if (!all_pass) {
    return fail(VRT_NUMERICAL,
                "vrt_dual_check: a duality residual exceeded its bound");
  }
  return VRT_OK;
}

vrt_status vrt_renorm_report(const char* config_path, const char* sweep_dir) {
  if (vrt_status s =
          require(config_path != nullptr && sweep_dir != nullptr &&
                      sweep_dir[0] != '\0',
                  "vrt_renorm_report: config path and sweep dir required"))
    return s;
  return guarded([&] {
    const vortexlab::SweepConfig config =
        vortexlab::parse_sweep_config(jsonw::read_text_file(config_path));
    vortexlab::renorm_deep_report(config, sweep_dir);
  });
}

vrt_status vrt_export_report(const char* report_path, const char* format,
                             const char* out_dir) {
  if (vrt_status s = require(report_path != nullptr && format != nullptr &&
                                 out_dir != nullptr && out_dir[0] != '\0',
                             "vrt_export_report: NULL argument"))
    return s;
  return guarded([&] {
    const vortexlab::SweepReport report =
        vortexlab::report_from_json(jsonw::read_text_file(report_path));
    vortexlab::export_report(report, format, out_dir);
  });
}

}  // extern "C"

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "vortexlab.h"

// Thin shell over the C ABI. Everything numerical lives behind vortexlab.h;
// this file only maps flags to calls and status codes to exit codes.
// Logging verbosity comes from the VORTEX_LOG environment variable
// (error, warn, info, debug).

namespace {

int finish(vrt_status status) {
  if (status != VRT_OK) {
    std::fprintf(stderr, "error: %s\n", vrt_last_error());
  }
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vortexlab: viscous vorticity runs, dual transport checks and "
               "viscosity-sweep reports"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(vrt_version()));

  std::string config;
  std::string out;
  std::string format = "json";
  std::size_t workers = 0;
  std::size_t seed = 0;

  CLI::App* run_ns =
      app.add_subcommand("run-ns", "One viscous run from a JSON config");
  run_ns->add_option("--config", config, "JSON config file")
      ->required();
  run_ns->add_option("--out", out, "Output directory")->required();
  run_ns->add_option("--seed", seed, "Datum seed override (0 keeps config)");

  CLI::App* run_sweep = app.add_subcommand(
      "run-sweep", "Viscosity sweep: runs, duals, cross-run tables");
  run_sweep->add_option("--config", config, "JSON config file")
      ->required();
  run_sweep->add_option("--out", out, "Output directory")->required();
  run_sweep->add_option("--workers", workers,
                        "Worker threads (0 keeps config)");
  run_sweep->add_option("--seed", seed, "Datum seed override (0 keeps config)");

  CLI::App* dual = app.add_subcommand(
      "dual-check", "Duality identity for every viscosity and source");
  dual->add_option("--config", config, "JSON config file")
      ->required();
  dual->add_option("--out", out, "Directory for dual_check.json (optional)");
  dual->add_option("--seed", seed, "Datum seed override (0 keeps config)");

  CLI::App* renorm = app.add_subcommand(
      "renorm-report", "Deep renormalization tables for a finished sweep");
  renorm->add_option("--config", config, "JSON config file used for the sweep")
      ->required();
  renorm->add_option("--out", out, "Sweep directory written by run-sweep")
      ->required();

  CLI::App* exp = app.add_subcommand(
      "export", "Re-export a sweep report.json as json or csv");
  exp->add_option("--config", config, "report.json produced by run-sweep")
      ->required();
  exp->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(VRT_VALIDATION);
  }

  if (run_ns->parsed()) {
    return finish(vrt_run_ns(config.c_str(), out.c_str(), seed));
  }
  if (run_sweep->parsed()) {
    return finish(vrt_run_sweep(config.c_str(), out.c_str(), workers, seed));
  }
  if (dual->parsed()) {
    return finish(vrt_dual_check(config.c_str(), out.c_str(), seed));
  }
  if (renorm->parsed()) {
    return finish(vrt_renorm_report(config.c_str(), out.c_str()));
  }
  if (exp->parsed()) {
    return finish(vrt_export_report(config.c_str(), format.c_str(),
                                    out.c_str()));
  }
  return static_cast<int>(VRT_VALIDATION);
}

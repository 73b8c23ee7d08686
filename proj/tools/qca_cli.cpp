// qca: command-line front end for the Dirac automaton scenarios.
//
//   qca run <config.json> [--steps N] [--mass m] [--engine e] [--output-dir d]
//   qca validate <config.json> [same overrides]
//   qca export-dispersion --dimension 1|2 --mass m [--resolution N] [--output-dir d]
//   qca export-group-velocity (--config c | --mass m) [--resolution N] [--output-dir d]
//   qca compare-asymptotics --mass m --k0 pi/4 --width 8 --steps 100 [--band 1]
//   qca constants [--units codata2018 | --length l --time t --mass-kg M]
//
// Errors are printed to stderr as {"error": {"category": ..., "message": ...}}.
// Exit codes: 2 validation, 3 wrap risk, 4 io, 5 engine mismatch, 1 other.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>

#include "qca/asymptotics.hpp"
#include "qca/planck_units.hpp"
#include "qca/scenario/config.hpp"
#include "qca/scenario/exports.hpp"
#include "qca/scenario/output.hpp"
#include "qca/scenario/run.hpp"

using nlohmann::json;
namespace fs = std::filesystem;
namespace sc = qca::scenario;

namespace {

int exit_code(qca::ErrorKind kind) {
  switch (kind) {
    case qca::ErrorKind::config:
    case qca::ErrorKind::domain:
    case qca::ErrorKind::out_of_range:
    case qca::ErrorKind::seam_leakage:
    case qca::ErrorKind::singular: return 2;
    case qca::ErrorKind::wrap_risk: return 3;
    case qca::ErrorKind::io: return 4;
    case qca::ErrorKind::engine_mismatch: return 5;
  }
  return 1;
}

int report(const std::string& category, const std::string& message, int code) {
  std::cerr << json{{"error", {{"category", category}, {"message", message}}}}.dump() << "\n";
  return code;
}

struct Overrides {
  std::optional<qca::Index> steps;
  std::optional<double> mass;
  std::optional<std::string> engine;
  std::optional<std::string> output_dir;
  std::optional<std::string> name;

  void attach(CLI::App* app) {
    app->add_option("--steps", steps, "override the number of steps");
    app->add_option("--mass", mass, "override params.mass");
    app->add_option("--engine", engine, "override the engine")->check(CLI::IsMember({"stencil", "spectral", "both"}));
    app->add_option("--output-dir", output_dir, "override output_dir");
    app->add_option("--name", name, "override the scenario name");
  }

  sc::ScenarioConfig load(const std::string& path) const {
    json doc = sc::load_json(path);
    if (steps) doc["steps"] = *steps;
    if (mass) doc["params"]["mass"] = *mass;
    if (engine) doc["engine"] = *engine;
    if (output_dir) doc["output_dir"] = *output_dir;
    if (name) doc["name"] = *name;
    return sc::parse_config(doc);
  }
};

fs::path default_dir(const std::optional<std::string>& flag, const std::string& leaf) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QCA_OUTPUT_DIR"); env && *env) return fs::path(env) / leaf;
  return fs::path("qca_output") / leaf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac quantum cellular automaton scenarios"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides overrides;

  auto* run = app.add_subcommand("run", "execute a scenario and write its output files");
  run->add_option("config", config_path, "scenario JSON file")->required();
  overrides.attach(run);

  auto* validate = app.add_subcommand("validate", "check a scenario without running it");
  validate->add_option("config", config_path, "scenario JSON file")->required();
  overrides.attach(validate);

  int dimension = 1;
  double mass = 0;
  double chi_re = 1, chi_im = 0;
  qca::Index resolution = 0;
  std::optional<std::string> out_dir;
  auto* dispersion = app.add_subcommand("export-dispersion", "write the dispersion relation on a Brillouin grid");
  dispersion->add_option("--dimension", dimension)->check(CLI::IsMember({1, 2}));
  dispersion->add_option("--mass", mass)->required();
  dispersion->add_option("--chi-re", chi_re);
  dispersion->add_option("--chi-im", chi_im);
  dispersion->add_option("--resolution", resolution, "grid points per axis (default 256 in 1D, 128 in 2D)");
  dispersion->add_option("--output-dir", out_dir);

  std::optional<std::string> gv_config;
  auto* velocity = app.add_subcommand("export-group-velocity", "write the 2D group velocity surface");
  velocity->add_option("--config", gv_config, "2D scenario JSON supplying mass, chi and resolution");
  velocity->add_option("--mass", mass);
  velocity->add_option("--chi-re", chi_re);
  velocity->add_option("--chi-im", chi_im);
  velocity->add_option("--resolution", resolution);
  velocity->add_option("--output-dir", out_dir);

  std::string k0_text = "pi/4";
  double width = 16;
  qca::Index steps = 100;
  int band = 1;
  std::optional<std::string> compare_out;
  auto* compare = app.add_subcommand("compare-asymptotics",
                                     "compare the 1D automaton with the drift-diffusion envelope");
  compare->add_option("--mass", mass)->required();
  compare->add_option("--k0", k0_text, "carrier momentum, e.g. 0.785 or pi/4");
  compare->add_option("--width", width);
  compare->add_option("--steps", steps);
  compare->add_option("--band", band)->check(CLI::IsMember({1, -1}));
  compare->add_option("--output", compare_out, "also write the result JSON to this file");

  std::string units_name = "codata2018";
  std::optional<double> length_m, time_s, mass_kg;
  auto* constants = app.add_subcommand("constants", "derive c, hbar, G and the automaton bounds");
  constants->add_option("--units", units_name);
  constants->add_option("--length", length_m, "Planck length in m");
  constants->add_option("--time", time_s, "Planck time in s");
  constants->add_option("--mass-kg", mass_kg, "Planck mass in kg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("config", e.what(), 2);
  }

  try {
    if (*run) {
      const auto config = overrides.load(config_path);
      const auto record = sc::run(config);
      const fs::path dir = sc::resolve_output_dir(config);
      const auto sidecar = sc::write_run_outputs(record, dir);
      json summary = {{"output_dir", dir.string()}, {"files", json::array()}};
      for (const auto& f : sidecar["files"]) summary["files"].push_back(f["name"]);
      if (sidecar.contains("norms")) summary["norms"] = sidecar["norms"];
      if (sidecar.contains("peak")) summary["peak"] = sidecar["peak"];
      if (record.engine_difference) summary["engine_difference"] = *record.engine_difference;
      std::cout << summary.dump(2) << "\n";
    } else if (*validate) {
      const auto config = overrides.load(config_path);
      sc::validate(config);
      json axes = json::array();
      for (int a = 0; a < config.dimension; ++a) {
        axes.push_back({{"length", config.lattice[a]},
                        {"support", sc::support_width(config, a)},
                        {"required_length_exclusive", 2 * config.steps + sc::support_width(config, a)}});
      }
      std::cout << json{{"valid", true}, {"config", sc::to_json(config)}, {"axes", axes}}.dump(2) << "\n";
    } else if (*dispersion) {
      if (resolution == 0) resolution = dimension == 1 ? 256 : 128;
      const fs::path dir = default_dir(out_dir, "dispersion");
      sc::export_dispersion(dimension, mass, {chi_re, chi_im}, resolution, dir);
      std::cout << json{{"output_dir", dir.string()}}.dump() << "\n";
    } else if (*velocity) {
      const fs::path dir = default_dir(out_dir, "group_velocity");
      if (gv_config) {
        auto config = sc::load_config(*gv_config);
        if (resolution > 0) config.observables.group_velocity_resolution = resolution;
        sc::export_group_velocity_surface(config, dir);
      } else {
        sc::export_group_velocity_surface(qca::AutomatonParams2D<double>(mass, {chi_re, chi_im}),
                                          resolution > 0 ? resolution : 128, dir);
      }
      std::cout << json{{"output_dir", dir.string()}}.dump() << "\n";
    } else if (*compare) {
      qca::WavepacketSpec1D<double> spec;
      spec.width = {width};
      spec.momentum = {sc::parse_angle(json(k0_text))};
      spec.band = band;
      const auto result = qca::compare_to_automaton(spec, mass, steps);
      json out = sc::to_json(result);
      out["width"] = width;
      out["steps"] = steps;
      if (compare_out) sc::atomic_write(*compare_out, out.dump(2) + "\n");
      std::cout << out.dump(2) << "\n";
    } else if (*constants) {
      qca::PlanckUnits<double> units = qca::codata2018();
      std::string label = units_name;
      if (length_m || time_s || mass_kg) {
        if (!(length_m && time_s && mass_kg)) {
          return report("config", "--length, --time and --mass-kg must be given together", 2);
        }
        units = qca::PlanckUnits<double>(*length_m, *time_s, *mass_kg);
        label = "custom";
      } else if (const auto profile = qca::units_profile(units_name)) {
        units = *profile;
      } else {
        return report("config", "unknown units profile '" + units_name + "'", 2);
      }
      std::cout << json{{"units", label},
                        {"speed_of_light_m_per_s", units.speed_of_light()},
                        {"reduced_planck_J_s", units.reduced_planck()},
                        {"gravitational_m3_per_kg_s2", units.gravitational()},
                        {"max_energy_J", qca::max_energy(units)},
                        {"max_momentum_kg_m_per_s", qca::max_momentum(units)}}
                       .dump(2)
                << "\n";
    }
  } catch (const qca::Error& e) {
    return report(std::string(qca::to_string(e.kind())), e.what(), exit_code(e.kind()));
  } catch (const json::exception& e) {
    return report("config", e.what(), 2);
  } catch (const std::exception& e) {
    return report("internal", e.what(), 1);
  }
  return 0;
}

#pragma once

#include <complex>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qca/error.hpp"
#include "qca/lattice.hpp"
#include "qca/planck_units.hpp"

namespace qca::scenario {

inline constexpr int kSchemaVersion = 1;

enum class StateKind { vacuum, delta, gaussian };
enum class Engine { stencil, spectral, both };
enum class PeakObservable { total, spin_up };

struct InitialState {
  StateKind kind = StateKind::vacuum;
  // delta
  std::vector<Index> site;
  std::vector<std::complex<double>> spinor;
  // gaussian
  std::vector<double> center;
  std::vector<double> width;
  std::vector<double> momentum;
  int band = 1;
  std::optional<std::vector<std::complex<double>>> polarization;  // empty: band spinor
};

struct Observables {
  bool probability_maps = true;
  bool norm_trace = true;
  std::optional<PeakObservable> peak_trajectory;
  std::optional<Index> group_velocity_resolution;
};

struct UnitsProfile {
  std::string name = "codata2018";  // "custom" when given as a triple
  PlanckUnits<double> units = codata2018();
};

struct ScenarioConfig {
  int schema_version = kSchemaVersion;
  std::string name = "scenario";
  int dimension = 1;
  std::vector<Index> lattice;
  double mass = 0;
  std::complex<double> chi{1, 0};
  InitialState initial;
  Index steps = 0;
  Engine engine = Engine::stencil;
  Observables observables;
  UnitsProfile units;
  std::string output_dir;  // empty: resolved at run time
};

std::string to_string(StateKind kind);
std::string to_string(Engine engine);
std::string to_string(PeakObservable observable);

/// Parses "pi", "-pi/2", "3pi/4", "0.5*pi" or a plain number.
double parse_angle(const nlohmann::json& value);

ScenarioConfig parse_config(const nlohmann::json& document);
ScenarioConfig load_config(const std::filesystem::path& path);
nlohmann::json load_json(const std::filesystem::path& path);

/// Canonical JSON form. parse_config(to_json(c)) reproduces c exactly.
nlohmann::json to_json(const ScenarioConfig& config);

/// Width of the initially occupied region along an axis (0 for vacuum).
Index support_width(const ScenarioConfig& config, int axis);

/// Checks domains and the no-wrap condition L_axis > 2 T + support.
/// Throws ErrorKind::config / domain / wrap_risk.
void validate(const ScenarioConfig& config);

/// Output directory after applying the QCA_OUTPUT_DIR fallback.
std::filesystem::path resolve_output_dir(const ScenarioConfig& config);

}  // namespace qca::scenario

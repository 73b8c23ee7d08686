#include "qca/scenario/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>

#include "qca/dirac1d.hpp"
#include "qca/dirac2d.hpp"
#include "qca/wavepacket.hpp"

namespace qca::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::config, message); }

void reject_unknown(const json& object, const std::string& where, std::set<std::string> allowed) {
  if (!object.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  return value.get<double>();
}

Index integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(where + " must be an integer");
  return value.get<Index>();
}

std::complex<double> complex_value(const json& value, const std::string& where) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  fail(where + " must be a number or a [re, im] pair");
}

std::vector<std::complex<double>> complex_list(const json& value, const std::string& where) {
  if (!value.is_array()) fail(where + " must be a list of complex entries");
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(complex_value(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json complex_list_json(const std::vector<std::complex<double>>& values) {
  json out = json::array();
  for (const auto& z : values) out.push_back(complex_json(z));
  return out;
}

template <typename T, typename F>
std::vector<T> list(const json& value, std::size_t expected, const std::string& where, F&& convert) {
  if (value.is_number() || value.is_string()) {
    if (expected != 1) fail(where + " needs " + std::to_string(expected) + " entries");
    return {convert(value, where)};
  }
  if (!value.is_array() || value.size() != expected) {
    fail(where + " needs " + std::to_string(expected) + " entries");
  }
  std::vector<T> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(convert(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

StateKind parse_kind(const std::string& s) {
  if (s == "vacuum") return StateKind::vacuum;
  if (s == "delta") return StateKind::delta;
  if (s == "gaussian") return StateKind::gaussian;
  fail("initial_state.kind must be vacuum, delta or gaussian (got '" + s + "')");
}

Engine parse_engine(const std::string& s) {
  if (s == "stencil") return Engine::stencil;
  if (s == "spectral") return Engine::spectral;
  if (s == "both") return Engine::both;
  fail("engine must be stencil, spectral or both (got '" + s + "')");
}

PeakObservable parse_peak(const std::string& s) {
  if (s == "total") return PeakObservable::total;
  if (s == "spin_up") return PeakObservable::spin_up;
  fail("observables.peak_trajectory must be total or spin_up (got '" + s + "')");
}

InitialState parse_initial(const json& j, int dimension, const std::vector<Index>& lattice) {
  reject_unknown(j, "initial_state",
                 {"kind", "site", "spinor", "center", "width", "momentum", "band", "polarization"});
  InitialState state;
  if (!j.contains("kind") || !j["kind"].is_string()) fail("initial_state.kind is required");
  state.kind = parse_kind(j["kind"].get<std::string>());
  const auto dim = static_cast<std::size_t>(dimension);

  switch (state.kind) {
    case StateKind::vacuum:
      break;
    case StateKind::delta: {
      if (j.contains("site")) {
        state.site = list<Index>(j["site"], dim, "initial_state.site", integer);
      } else {
        for (Index l : lattice) state.site.push_back(l / 2);
      }
      if (j.contains("spinor")) {
        state.spinor = complex_list(j["spinor"], "initial_state.spinor");
      } else {
        state.spinor.assign(2 * dim, {0, 0});
        state.spinor[0] = 1;
      }
      break;
    }
    case StateKind::gaussian: {
      if (!j.contains("width")) fail("initial_state.width is required for a gaussian state");
      state.width = list<double>(j["width"], dim, "initial_state.width", number);
      if (j.contains("center")) {
        state.center = list<double>(j["center"], dim, "initial_state.center", number);
      } else {
        for (Index l : lattice) state.center.push_back(double(l / 2));
      }
      if (j.contains("momentum")) {
        state.momentum = list<double>(j["momentum"], dim, "initial_state.momentum",
                                      [](const json& v, const std::string&) { return parse_angle(v); });
      } else {
        state.momentum.assign(dim, 0.0);
      }
      if (j.contains("band")) state.band = static_cast<int>(integer(j["band"], "initial_state.band"));
      if (j.contains("polarization")) {
        const auto& p = j["polarization"];
        if (p.is_string()) {
          if (p.get<std::string>() != "band") fail("initial_state.polarization must be \"band\" or a spinor");
        } else {
          state.polarization = complex_list(p, "initial_state.polarization");
        }
      }
      break;
    }
  }
  return state;
}

UnitsProfile parse_units(const json& j) {
  UnitsProfile profile;
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    const auto units = units_profile(name);
    if (!units) fail("unknown units profile '" + name + "' (known: codata2018, natural)");
    profile.name = name;
    profile.units = *units;
    return profile;
  }
  reject_unknown(j, "units", {"length_m", "time_s", "mass_kg"});
  if (!j.contains("length_m") || !j.contains("time_s") || !j.contains("mass_kg")) {
    fail("custom units need length_m, time_s and mass_kg");
  }
  profile.name = "custom";
  profile.units = PlanckUnits<double>(number(j["length_m"], "units.length_m"),
                                      number(j["time_s"], "units.time_s"),
                                      number(j["mass_kg"], "units.mass_kg"));
  return profile;
}

}  // namespace

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::vacuum: return "vacuum";
    case StateKind::delta: return "delta";
    case StateKind::gaussian: return "gaussian";
  }
  return "?";
}

std::string to_string(Engine engine) {
  switch (engine) {
    case Engine::stencil: return "stencil";
    case Engine::spectral: return "spectral";
    case Engine::both: return "both";
  }
  return "?";
}

std::string to_string(PeakObservable observable) {
  return observable == PeakObservable::total ? "total" : "spin_up";
}

double parse_angle(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) fail("angle must be a number or a string such as \"pi/4\"");
  const std::string text = value.get<std::string>();
  static const std::regex pattern(
      R"(^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*((?:\d+\.?\d*|\.\d+)))?\s*$)");
  std::smatch match;
  if (std::regex_match(text, match, pattern)) {
    double result = std::numbers::pi;
    if (match[2].matched) result *= std::stod(match[2].str());
    if (match[3].matched) {
      const double denominator = std::stod(match[3].str());
      if (denominator == 0) fail("angle '" + text + "' divides by zero");
      result /= denominator;
    }
    return match[1].str() == "-" ? -result : result;
  }
  try {
    std::size_t used = 0;
    const double result = std::stod(text, &used);
    if (used == text.size()) return result;
  } catch (const std::exception&) {
  }
  fail("cannot parse angle '" + text + "'");
}

ScenarioConfig parse_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"schema_version", "name", "dimension", "lattice", "params", "initial_state", "steps",
                  "engine", "observables", "units", "output_dir"});
  ScenarioConfig c;
  if (!doc.contains("schema_version")) fail("schema_version is required");
  c.schema_version = static_cast<int>(integer(doc["schema_version"], "schema_version"));
  if (c.schema_version != kSchemaVersion) {
    fail("unsupported schema_version " + std::to_string(c.schema_version) + " (this build reads " +
         std::to_string(kSchemaVersion) + ")");
  }
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) fail("name must be a string");
    c.name = doc["name"].get<std::string>();
  }
  if (!doc.contains("dimension")) fail("dimension is required");
  c.dimension = static_cast<int>(integer(doc["dimension"], "dimension"));
  if (c.dimension != 1 && c.dimension != 2) fail("dimension must be 1 or 2");

  if (!doc.contains("lattice")) fail("lattice is required");
  reject_unknown(doc["lattice"], "lattice", {"size"});
  if (!doc["lattice"].contains("size")) fail("lattice.size is required");
  c.lattice = list<Index>(doc["lattice"]["size"], std::size_t(c.dimension), "lattice.size", integer);

  if (doc.contains("params")) {
    reject_unknown(doc["params"], "params", {"mass", "chi"});
    const auto& p = doc["params"];
    if (p.contains("mass")) c.mass = number(p["mass"], "params.mass");
    if (p.contains("chi")) c.chi = complex_value(p["chi"], "params.chi");
  }
  if (!doc.contains("initial_state")) fail("initial_state is required");
  c.initial = parse_initial(doc["initial_state"], c.dimension, c.lattice);
  if (!doc.contains("steps")) fail("steps is required");
  c.steps = integer(doc["steps"], "steps");
  if (doc.contains("engine")) {
    if (!doc["engine"].is_string()) fail("engine must be a string");
    c.engine = parse_engine(doc["engine"].get<std::string>());
  }
  if (doc.contains("observables")) {
    const auto& o = doc["observables"];
    reject_unknown(o, "observables",
                   {"probability_maps", "norm_trace", "peak_trajectory", "group_velocity_field"});
    if (o.contains("probability_maps")) c.observables.probability_maps = o["probability_maps"].get<bool>();
    if (o.contains("norm_trace")) c.observables.norm_trace = o["norm_trace"].get<bool>();
    if (o.contains("peak_trajectory") && !o["peak_trajectory"].is_null()) {
      if (!o["peak_trajectory"].is_string()) fail("observables.peak_trajectory must be a string");
      c.observables.peak_trajectory = parse_peak(o["peak_trajectory"].get<std::string>());
    }
    if (o.contains("group_velocity_field") && !o["group_velocity_field"].is_null()) {
      const auto& g = o["group_velocity_field"];
      reject_unknown(g, "observables.group_velocity_field", {"resolution"});
      c.observables.group_velocity_resolution =
          integer(g.value("resolution", json(128)), "observables.group_velocity_field.resolution");
    }
  }
  if (doc.contains("units")) c.units = parse_units(doc["units"]);
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) fail("output_dir must be a string");
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  return c;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

ScenarioConfig load_config(const std::filesystem::path& path) { return parse_config(load_json(path)); }

json to_json(const ScenarioConfig& c) {
  json doc;
  doc["schema_version"] = c.schema_version;
  doc["name"] = c.name;
  doc["dimension"] = c.dimension;
  doc["lattice"] = {{"size", c.lattice}};
  doc["params"] = {{"mass", c.mass}, {"chi", complex_json(c.chi)}};

  json state;
  state["kind"] = to_string(c.initial.kind);
  if (c.initial.kind == StateKind::delta) {
    state["site"] = c.initial.site;
    state["spinor"] = complex_list_json(c.initial.spinor);
  } else if (c.initial.kind == StateKind::gaussian) {
    state["center"] = c.initial.center;
    state["width"] = c.initial.width;
    state["momentum"] = c.initial.momentum;
    state["band"] = c.initial.band;
    state["polarization"] =
        c.initial.polarization ? complex_list_json(*c.initial.polarization) : json("band");
  }
  doc["initial_state"] = state;
  doc["steps"] = c.steps;
  doc["engine"] = to_string(c.engine);

  json obs;
  obs["probability_maps"] = c.observables.probability_maps;
  obs["norm_trace"] = c.observables.norm_trace;
  obs["peak_trajectory"] =
      c.observables.peak_trajectory ? json(to_string(*c.observables.peak_trajectory)) : json(nullptr);
  obs["group_velocity_field"] = c.observables.group_velocity_resolution
                                    ? json{{"resolution", *c.observables.group_velocity_resolution}}
                                    : json(nullptr);
  doc["observables"] = obs;

  if (c.units.name == "custom") {
    doc["units"] = {{"length_m", c.units.units.length()},
                    {"time_s", c.units.units.time()},
                    {"mass_kg", c.units.units.mass()}};
  } else {
    doc["units"] = c.units.name;
  }
  if (!c.output_dir.empty()) doc["output_dir"] = c.output_dir;
  return doc;
}

Index support_width(const ScenarioConfig& c, int axis) {
  switch (c.initial.kind) {
    case StateKind::vacuum: return 0;
    case StateKind::delta: return 1;
    case StateKind::gaussian: return envelope_support(c.initial.width[axis]);
  }
  return 0;
}

void validate(const ScenarioConfig& c) {
  const auto dim = static_cast<std::size_t>(c.dimension);
  if (c.lattice.size() != dim) fail("lattice.size needs one entry per dimension");
  for (Index l : c.lattice) {
    if (l < 2) fail("lattice sizes must be >= 2");
  }
  if (c.steps < 0) fail("steps must be >= 0");
  if (c.dimension == 1) {
    AutomatonParams1D<double> check(c.mass);
    (void)check;
  } else {
    AutomatonParams2D<double> check(c.mass, c.chi);
    (void)check;
  }

  const auto& s = c.initial;
  if (s.kind == StateKind::delta) {
    if (s.site.size() != dim) fail("initial_state.site needs one entry per dimension");
    for (std::size_t a = 0; a < dim; ++a) {
      if (s.site[a] < 0 || s.site[a] >= c.lattice[a]) {
        throw Error(ErrorKind::out_of_range, "initial_state.site[" + std::to_string(a) + "] = " +
                                                 std::to_string(s.site[a]) + " lies outside [0, " +
                                                 std::to_string(c.lattice[a]) + ")");
      }
    }
    if (s.spinor.size() != 2 * dim) {
      fail("initial_state.spinor needs " + std::to_string(2 * dim) + " components");
    }
    double n2 = 0;
    for (const auto& z : s.spinor) n2 += std::norm(z);
    if (std::abs(n2 - 1) > 1e-12) throw Error(ErrorKind::domain, "initial_state.spinor must be normalized");
  }
  if (s.kind == StateKind::gaussian) {
    if (s.center.size() != dim || s.width.size() != dim || s.momentum.size() != dim) {
      fail("initial_state center/width/momentum need one entry per dimension");
    }
    for (std::size_t a = 0; a < dim; ++a) {
      if (!(s.width[a] > 0) || !std::isfinite(s.width[a])) {
        throw Error(ErrorKind::domain, "initial_state.width must be positive and finite");
      }
      if (!(std::abs(s.momentum[a]) <= std::numbers::pi)) {
        throw Error(ErrorKind::domain, "initial_state.momentum must lie in [-pi, pi]");
      }
    }
    if (s.band != 1 && s.band != -1) throw Error(ErrorKind::domain, "initial_state.band must be +1 or -1");
    if (s.polarization) {
      if (s.polarization->size() != 2 * dim) {
        fail("initial_state.polarization needs " + std::to_string(2 * dim) + " components");
      }
      double n2 = 0;
      for (const auto& z : *s.polarization) n2 += std::norm(z);
      if (!(n2 > 0)) throw Error(ErrorKind::domain, "initial_state.polarization must be nonzero");
    }
  }
  if (c.observables.group_velocity_resolution) {
    if (c.dimension != 2) fail("observables.group_velocity_field requires dimension 2");
    if (*c.observables.group_velocity_resolution < 16) {
      fail("observables.group_velocity_field.resolution must be >= 16");
    }
  }

  static const char* axes[] = {"x", "y"};
  for (std::size_t a = 0; a < dim; ++a) {
    const Index support = support_width(c, static_cast<int>(a));
    const Index required = 2 * c.steps + support;
    if (c.lattice[a] <= required) {
      throw Error(ErrorKind::wrap_risk,
                  std::string("lattice axis ") + axes[a] + " has L = " + std::to_string(c.lattice[a]) +
                      " but T = " + std::to_string(c.steps) + " steps with support " +
                      std::to_string(support) + " need L > 2T + support = " + std::to_string(required) +
                      "; use L >= " + std::to_string(required + 1) + " or fewer steps");
    }
  }
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("QCA_OUTPUT_DIR"); env && *env) {
    return std::filesystem::path(env) / c.name;
  }
  return std::filesystem::path("qca_output") / c.name;
}

}  // namespace qca::scenario

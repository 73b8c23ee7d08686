#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qca/dirac1d.hpp"
#include "qca/scenario/config.hpp"
#include "qca/scenario/exports.hpp"
#include "qca/scenario/output.hpp"
#include "qca/scenario/run.hpp"

using namespace qca;
using namespace qca::scenario;
using nlohmann::json;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("qca_test_scenario_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

json base_1d() {
  return json::parse(R"({
    "schema_version": 1, "name": "t1d", "dimension": 1,
    "lattice": {"size": 512},
    "params": {"mass": 0.6},
    "initial_state": {"kind": "gaussian", "center": 256, "width": 8, "momentum": "pi/2"},
    "steps": 100, "engine": "both",
    "observables": {"peak_trajectory": "total"}
  })");
}

json base_2d() {
  return json::parse(R"({
    "schema_version": 1, "name": "t2d", "dimension": 2,
    "lattice": {"size": [64, 60]},
    "params": {"mass": 0.3, "chi": [0, 1]},
    "initial_state": {"kind": "gaussian", "center": [32, 30], "width": [2, 1.5], "momentum": ["pi/3", -0.4]},
    "steps": 8, "engine": "both",
    "observables": {"peak_trajectory": "spin_up", "group_velocity_field": {"resolution": 32}}
  })");
}

ErrorKind kind_of(const json& doc) {
  try {
    validate(parse_config(doc));
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::config;
}

}  // namespace

TEST_CASE("parse_angle") {
  CHECK(parse_angle(json(0.5)) == 0.5);
  CHECK(parse_angle(json("pi")) == pi);
  CHECK(parse_angle(json("-pi/2")) == -pi / 2);
  CHECK(parse_angle(json("3pi/4")) == 3 * pi / 4);
  CHECK(parse_angle(json("0.5*pi")) == 0.5 * pi);
  CHECK(parse_angle(json("1.25")) == 1.25);
  CHECK_THROWS_AS(parse_angle(json("tau")), Error);
  CHECK_THROWS_AS(parse_angle(json("pi/0")), Error);
}

TEST_CASE("config echo is lossless") {
  for (const json& doc : {base_1d(), base_2d()}) {
    const auto config = parse_config(doc);
    const json echo = to_json(config);
    CHECK(to_json(parse_config(echo)) == echo);
    CHECK(parse_config(echo).initial.momentum == config.initial.momentum);
  }
  json custom = base_1d();
  custom["units"] = {{"length_m", 2.0}, {"time_s", 3.0}, {"mass_kg", 5.0}};
  custom["initial_state"]["polarization"] = json::array({json::array({0.6, 0}), json::array({0, 0.8})});
  const json echo = to_json(parse_config(custom));
  CHECK(echo["units"]["time_s"] == 3.0);
  CHECK(to_json(parse_config(echo)) == echo);
}

TEST_CASE("validation failures are categorized") {
  json doc = base_1d();
  doc["stpes"] = 3;
  CHECK(kind_of(doc) == ErrorKind::config);

  doc = base_1d();
  doc["params"]["mass"] = 1.2;
  CHECK(kind_of(doc) == ErrorKind::domain);

  doc = base_1d();
  doc["schema_version"] = 2;
  CHECK(kind_of(doc) == ErrorKind::config);

  doc = base_2d();
  doc["lattice"]["size"] = {64};
  CHECK(kind_of(doc) == ErrorKind::config);

  doc = base_2d();
  doc["params"]["chi"] = {0.5, 0};
  CHECK(kind_of(doc) == ErrorKind::domain);

  doc = base_1d();
  doc["initial_state"] = {{"kind", "delta"}, {"site", 600}};
  CHECK(kind_of(doc) == ErrorKind::out_of_range);

  doc = base_1d();
  doc["steps"] = 200;  // 2T + support = 571 >= 512
  CHECK(kind_of(doc) == ErrorKind::wrap_risk);
  try {
    validate(parse_config(doc));
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("L >= 572") != std::string::npos);
  }

  doc = base_1d();
  doc["observables"]["group_velocity_field"] = {{"resolution", 64}};
  CHECK(kind_of(doc) == ErrorKind::config);
}

TEST_CASE("vacuum runs are all zero") {
  json doc = base_1d();
  doc["initial_state"] = {{"kind", "vacuum"}};
  doc["lattice"]["size"] = 256;
  const auto record = run(parse_config(doc));
  REQUIRE(record.norms.size() == 101);
  for (double n : record.norms) CHECK(n == 0.0);
  CHECK(record.final_maps.total.abs().maxCoeff() == 0.0);
  CHECK(*record.engine_difference == 0.0);
}

TEST_CASE("packet peak tracking") {
  SUBCASE("massless up packet moves one site per step to the left") {
    json doc = base_1d();
    doc["params"]["mass"] = 0.0;
    doc["initial_state"]["momentum"] = 0;
    doc["initial_state"]["polarization"] = {1, 0};
    const auto record = run(parse_config(doc));
    for (const auto& p : record.peak_trajectory) CHECK(p.site[0] == 256 - p.step);
  }
  SUBCASE("m = 0.6, k0 = pi/2 travels at the group velocity 0.8") {
    const auto record = run(parse_config(base_1d()));
    const auto v = fit_peak_velocity(record.peak_trajectory, {512});
    CHECK(std::abs(v[0] - group_velocity_1d(pi / 2, AutomatonParams1D<>(0.6))) < 0.05);
  }
  SUBCASE("m = 1 is stationary") {
    json doc = base_1d();
    doc["params"]["mass"] = 1.0;
    const auto record = run(parse_config(doc));
    for (const auto& p : record.peak_trajectory) CHECK(p.site[0] == 256);
  }
  SUBCASE("ties go to the lexicographically smallest (x, y)") {
    Eigen::ArrayXd map = Eigen::ArrayXd::Zero(12);  // 4 x 3
    map(1 + 4 * 2) = 1;                             // (1, 2)
    map(3 + 4 * 0) = 1;                             // (3, 0)
    map(1 + 4 * 1) = 1;                             // (1, 1)
    const auto peak = argmax_site(map, {4, 3});
    CHECK(peak.site == std::array<Index, 2>{1, 1});
    CHECK(argmax_site(Eigen::ArrayXd::Zero(12), {4, 3}).site == std::array<Index, 2>{0, 0});
    const auto trajectory = track_packet_peak({map, Eigen::ArrayXd::Zero(12)}, {4, 3});
    CHECK(trajectory[1].step == 1);
  }
  SUBCASE("velocity fit unwraps periodic jumps") {
    std::vector<PeakSample> trajectory;
    for (Index t = 0; t < 10; ++t) trajectory.push_back({t, {(8 - 2 * t + 100) % 10, 0}, 1.0});
    CHECK(fit_peak_velocity(trajectory, {10})[0] == doctest::Approx(-2.0));
  }
}

TEST_CASE("delta runs stay inside the causal square") {
  json doc = base_2d();
  doc["lattice"]["size"] = {41, 39};
  doc["steps"] = 15;
  doc["initial_state"] = {{"kind", "delta"}, {"site", {20, 19}}, {"spinor", {0, json::array({0, 1}), 0, 0}}};
  doc["engine"] = "stencil";
  doc.erase("observables");
  const auto record = run(parse_config(doc));
  for (Index y = 0; y < 39; ++y) {
    for (Index x = 0; x < 41; ++x) {
      if (std::abs(x - 20) > 15 || std::abs(y - 19) > 15) CHECK(record.final_maps.total(x + 41 * y) == 0.0);
    }
  }
  CHECK(std::abs(record.norms.back() - 1) < 1e-12);
}

TEST_CASE("spectral-only runs match the stencil") {
  json doc = base_2d();
  doc["engine"] = "spectral";
  const auto spectral = run(parse_config(doc));
  doc["engine"] = "stencil";
  const auto stencil = run(parse_config(doc));
  CHECK((spectral.final_maps.total - stencil.final_maps.total).abs().maxCoeff() < 1e-12);
  for (std::size_t t = 0; t < stencil.norms.size(); ++t) CHECK(std::abs(spectral.norms[t] - 1) < 1e-10);
}

TEST_CASE("output files match the sidecar and are reproducible") {
  const auto dir_a = scratch("a"), dir_b = scratch("b"), dir_c = scratch("c");
  const auto config = parse_config(base_2d());
  const auto sidecar = write_run_outputs(run(config), dir_a);
  write_run_outputs(run(config), dir_b);

  const json loaded = json::parse(slurp(dir_a / "run.json"));
  CHECK(loaded["format_version"] == kFormatVersion);
  CHECK(loaded == sidecar);
  write_run_outputs(run(parse_config(loaded["config"])), dir_c);

  for (const auto& file : loaded["files"]) {
    const std::string name = file["name"];
    CHECK(fs::exists(dir_a / name));
    CHECK_FALSE(fs::exists(dir_a / (name + ".tmp")));
    CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    CHECK(slurp(dir_a / name) == slurp(dir_c / name));
    if (file["format"] == "binary") {
      const auto values = read_f64(dir_a / name);
      const auto shape = file["shape"].get<std::vector<Index>>();
      CHECK(values.size() == std::size_t(shape[0] * shape[1]));
    }
  }

  const double norm_final = loaded["norms"]["final"];
  double total = 0, up = 0, down = 0;
  for (double v : read_f64(dir_a / "probability_total.f64")) total += v;
  for (double v : read_f64(dir_a / "probability_up.f64")) up += v;
  for (double v : read_f64(dir_a / "probability_down.f64")) down += v;
  CHECK(std::abs(total - norm_final) < 1e-9);
  CHECK(std::abs(up + down - norm_final) < 1e-9);
  CHECK(std::abs(total - loaded["map_sums"]["total"].get<double>()) < 1e-12);
  for (const auto& file : loaded["files"]) {
    if (file["name"] == "probability_total.f64") CHECK(file["shape"] == json({60, 64}));  // [Ly, Lx]
  }
  CHECK(loaded["physical"]["elapsed_time_s"].get<double>() == doctest::Approx(8 * 5.391247e-44));

  const auto trace = read_csv(dir_a / "norm_trace.csv");
  CHECK(trace.size() == 9);
  for (const auto& row : trace) CHECK(std::abs(row[1] - 1) < 1e-10);
  CHECK(read_csv(dir_a / "peak_trajectory.csv").size() == 9);

  const auto speed = read_f64(dir_a / "group_velocity_speed.f64");
  CHECK(speed.size() == 32 * 32);
}

TEST_CASE("1D outputs") {
  const auto dir = scratch("1d");
  json doc = base_1d();
  doc["steps"] = 10;
  write_run_outputs(run(parse_config(doc)), dir);
  const auto rows = read_csv(dir / "probability_final.csv");
  REQUIRE(rows.size() == 512);
  double total = 0;
  for (const auto& r : rows) {
    total += r[1];
    CHECK(std::abs(r[1] - r[2] - r[3]) < 1e-15);
  }
  CHECK(std::abs(total - 1) < 1e-9);
}

TEST_CASE("output directory resolution") {
  auto config = parse_config(base_1d());
  config.output_dir = "explicit";
  CHECK(resolve_output_dir(config) == fs::path("explicit"));
  config.output_dir.clear();
  setenv("QCA_OUTPUT_DIR", "/tmp/qca_env", 1);
  CHECK(resolve_output_dir(config) == fs::path("/tmp/qca_env") / "t1d");
  unsetenv("QCA_OUTPUT_DIR");
  CHECK(resolve_output_dir(config) == fs::path("qca_output") / "t1d");
}

TEST_CASE("group velocity surface export") {
  const auto dir = scratch("gv");
  const auto sidecar = export_group_velocity_surface(AutomatonParams2D<>(0.0), 128, dir);
  const auto speed = read_f64(dir / "group_velocity_speed.f64");
  REQUIRE(speed.size() == 128 * 128);
  const auto k = sidecar["k_axis"].get<std::vector<double>>();
  const auto at = [&](Index ix, Index iy) { return speed[ix + 128 * iy]; };
  double worst = 0;
  for (double v : speed) worst = std::max(worst, v);
  CHECK(worst <= 1.0);
  // index 0 is k = -pi, index 64 is k = 0
  CHECK(k[0] == doctest::Approx(-pi));
  CHECK(k[64] == 0.0);
  CHECK(at(0, 64) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at(64, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(at(1, 64) == doctest::Approx(at(127, 64)));
  CHECK(at(65, 64) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(at(64, 63) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-3));

  export_group_velocity_surface(AutomatonParams2D<>(1.0), 64, dir);
  for (double v : read_f64(dir / "group_velocity_speed.f64")) CHECK(v == 0.0);

  auto one_d = parse_config(base_1d());
  CHECK_THROWS_AS(export_group_velocity_surface(one_d, dir), Error);
}

TEST_CASE("dispersion export") {
  const auto dir = scratch("disp");
  export_dispersion(1, 0.6, {1, 0}, 64, dir);
  const auto rows = read_csv(dir / "dispersion.csv");
  REQUIRE(rows.size() == 64);
  for (const auto& r : rows) CHECK(r[1] == doctest::Approx(std::acos(0.8 * std::cos(r[0]))));
  const auto sidecar = export_dispersion(2, 0.0, {1, 0}, 32, dir);
  const auto omega = read_f64(dir / "dispersion_omega.f64");
  CHECK(omega.size() == 32 * 32);
  CHECK(omega[16 + 32 * 16] == doctest::Approx(pi / 2));  // k = 0
  CHECK(sidecar["files"][0]["shape"] == json({32, 32}));
}

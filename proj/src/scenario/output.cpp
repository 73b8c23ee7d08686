#include "qca/scenario/output.hpp"

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

namespace qca::scenario {

using nlohmann::json;
namespace fs = std::filesystem;

void atomic_write(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string format_number(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string encode_f64(std::span<const double> values) {
  std::string bytes(values.size() * 8, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (int b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
  return bytes;
}

std::vector<double> read_f64(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 8 != 0) throw Error(ErrorKind::io, path.string() + " is not a whole number of f64 values");
  std::vector<double> values(bytes.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(static_cast<unsigned char>(bytes[8 * i + b])) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
  return values;
}

namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

double sequential_sum(const Eigen::ArrayXd& values) {
  double sum = 0;
  for (Index i = 0; i < values.size(); ++i) sum += values(i);
  return sum;
}

json grid_entry(const std::string& name, const std::string& quantity, Index nx, Index ny) {
  return {{"name", name},         {"quantity", quantity},    {"format", "binary"},
          {"dtype", "float64"},   {"byte_order", "little"},  {"layout", "row-major"},
          {"shape", {ny, nx}},    {"axes", {"y", "x"}}};
}

json csv_entry(const std::string& name, const std::vector<std::string>& columns, std::size_t rows) {
  return {{"name", name}, {"format", "csv"}, {"columns", columns}, {"rows", rows}};
}

}  // namespace

json write_run_outputs(const RunRecord& record, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());

  const auto& c = record.config;
  json sidecar;
  sidecar["format_version"] = record.format_version;
  sidecar["config"] = to_json(c);
  json files = json::array();

  if (c.observables.norm_trace) {
    std::string csv = "step,norm\n";
    for (std::size_t t = 0; t < record.norms.size(); ++t) {
      csv += std::to_string(t) + "," + format_number(record.norms[t]) + "\n";
    }
    atomic_write(dir / "norm_trace.csv", csv);
    files.push_back(csv_entry("norm_trace.csv", {"step", "norm"}, record.norms.size()));
    double drift = 0;
    for (double n : record.norms) drift = std::max(drift, std::abs(n - record.norms.front()));
    sidecar["norms"] = {{"initial", record.norms.front()},
                        {"final", record.norms.back()},
                        {"max_drift", drift}};
  }

  if (c.observables.peak_trajectory) {
    const bool two_d = c.dimension == 2;
    std::string csv = two_d ? "step,x,y,value\n" : "step,x,value\n";
    for (const auto& p : record.peak_trajectory) {
      csv += std::to_string(p.step) + "," + std::to_string(p.site[0]) + ",";
      if (two_d) csv += std::to_string(p.site[1]) + ",";
      csv += format_number(p.value) + "\n";
    }
    atomic_write(dir / "peak_trajectory.csv", csv);
    files.push_back(csv_entry("peak_trajectory.csv",
                              two_d ? std::vector<std::string>{"step", "x", "y", "value"}
                                    : std::vector<std::string>{"step", "x", "value"},
                              record.peak_trajectory.size()));
    const std::vector<Index> shape(c.lattice.begin(), c.lattice.end());
    const auto velocity = fit_peak_velocity(record.peak_trajectory, shape);
    sidecar["peak"] = {{"observable", to_string(*c.observables.peak_trajectory)},
                       {"tie_break", "lexicographic (x, y)"},
                       {"fitted_velocity", velocity}};
  }

  if (c.observables.probability_maps) {
    const auto& maps = record.final_maps;
    if (c.dimension == 1) {
      std::string csv = "x,total,up,down\n";
      for (Index x = 0; x < maps.total.size(); ++x) {
        csv += std::to_string(x) + "," + format_number(maps.total(x)) + "," + format_number(maps.up(x)) + "," +
               format_number(maps.down(x)) + "\n";
      }
      atomic_write(dir / "probability_final.csv", csv);
      files.push_back(csv_entry("probability_final.csv", {"x", "total", "up", "down"},
                                static_cast<std::size_t>(maps.total.size())));
    } else {
      const Index nx = maps.shape[0], ny = maps.shape[1];
      const std::pair<const char*, const Eigen::ArrayXd*> grids[] = {
          {"total", &maps.total}, {"up", &maps.up}, {"down", &maps.down}};
      for (const auto& [label, grid] : grids) {
        const std::string name = std::string("probability_") + label + ".f64";
        atomic_write(dir / name, encode_f64({grid->data(), static_cast<std::size_t>(grid->size())}));
        files.push_back(grid_entry(name, std::string("probability_") + label, nx, ny));
      }
    }
    sidecar["map_sums"] = {{"total", sequential_sum(maps.total)},
                           {"up", sequential_sum(maps.up)},
                           {"down", sequential_sum(maps.down)}};
  }

  if (record.group_velocity) {
    const auto& g = *record.group_velocity;
    const auto write = [&](const char* label, const auto& array) {
      const std::string name = std::string("group_velocity_") + label + ".f64";
      atomic_write(dir / name, encode_f64({array.data(), static_cast<std::size_t>(array.size())}));
      json entry = grid_entry(name, std::string("group_velocity_") + label, g.resolution, g.resolution);
      entry["axes"] = {"ky", "kx"};
      files.push_back(entry);
    };
    write("vx", g.vx);
    write("vy", g.vy);
    write("speed", g.speed);
    sidecar["group_velocity_axis"] = g.k;
  }

  sidecar["files"] = files;
  json engine = {{"name", to_string(c.engine)}};
  if (record.engine_difference) engine["max_abs_difference"] = *record.engine_difference;
  sidecar["engine"] = engine;

  const auto& u = c.units.units;
  json extent = json::array();
  for (Index l : c.lattice) extent.push_back(double(l) * u.length());
  sidecar["physical"] = {{"units", c.units.name},
                         {"planck_length_m", u.length()},
                         {"planck_time_s", u.time()},
                         {"planck_mass_kg", u.mass()},
                         {"speed_of_light_m_per_s", u.speed_of_light()},
                         {"reduced_planck_J_s", u.reduced_planck()},
                         {"gravitational_m3_per_kg_s2", u.gravitational()},
                         {"elapsed_time_s", double(c.steps) * u.time()},
                         {"lattice_extent_m", extent},
                         {"mass_kg", c.mass * u.mass()},
                         {"max_energy_J", max_energy(u)},
                         {"max_momentum_kg_m_per_s", max_momentum(u)}};
  sidecar["timings_ms"] = record.timings_ms;
  sidecar["created_utc"] = utc_now();

  atomic_write(dir / "run.json", sidecar.dump(2) + "\n");
  return sidecar;
}

}  // namespace qca::scenario

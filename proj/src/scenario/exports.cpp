#include "qca/scenario/exports.hpp"

#include "qca/dirac1d.hpp"
#include "qca/scenario/output.hpp"

namespace qca::scenario {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
}

template <typename Array>
json write_grid(const fs::path& dir, const std::string& name, const Array& grid) {
  atomic_write(dir / name, encode_f64({grid.data(), static_cast<std::size_t>(grid.size())}));
  return {{"name", name},       {"format", "binary"},    {"dtype", "float64"},
          {"byte_order", "little"}, {"layout", "row-major"},
          {"shape", {grid.rows(), grid.cols()}}, {"axes", {"ky", "kx"}}};
}

}  // namespace

json export_group_velocity_surface(const AutomatonParams2D<double>& params, Index resolution,
                                   const fs::path& dir) {
  ensure_dir(dir);
  const auto field = group_velocity_field(params, resolution);
  json sidecar;
  sidecar["format_version"] = kFormatVersion;
  sidecar["kind"] = "group_velocity_surface";
  sidecar["mass"] = params.mass();
  sidecar["chi"] = {params.chi().real(), params.chi().imag()};
  sidecar["resolution"] = resolution;
  sidecar["k_axis"] = field.k;
  sidecar["files"] = {write_grid(dir, "group_velocity_vx.f64", field.vx),
                      write_grid(dir, "group_velocity_vy.f64", field.vy),
                      write_grid(dir, "group_velocity_speed.f64", field.speed)};
  sidecar["max_speed"] = field.speed.maxCoeff();
  atomic_write(dir / "group_velocity.json", sidecar.dump(2) + "\n");
  return sidecar;
}

json export_group_velocity_surface(const ScenarioConfig& config, const fs::path& dir) {
  if (config.dimension != 2) {
    throw Error(ErrorKind::config, "group velocity surfaces need a 2D config (dimension = 2)");
  }
  return export_group_velocity_surface(AutomatonParams2D<double>(config.mass, config.chi),
                                       config.observables.group_velocity_resolution.value_or(128), dir);
}

json export_dispersion(int dimension, double mass, std::complex<double> chi, Index resolution,
                       const fs::path& dir) {
  if (dimension != 1 && dimension != 2) throw Error(ErrorKind::config, "dimension must be 1 or 2");
  if (resolution < 2) throw Error(ErrorKind::config, "resolution must be >= 2");
  ensure_dir(dir);
  json sidecar;
  sidecar["format_version"] = kFormatVersion;
  sidecar["kind"] = "dispersion";
  sidecar["dimension"] = dimension;
  sidecar["mass"] = mass;
  sidecar["resolution"] = resolution;
  if (dimension == 1) {
    const AutomatonParams1D<double> params(mass);
    std::string csv = "k,omega,group_velocity\n";
    for (Index i = 0; i < resolution; ++i) {
      const double k = brillouin_axis_value<double>(i, resolution);
      csv += format_number(k) + "," + format_number(dispersion_1d(k, params)) + "," +
             format_number(group_velocity_1d(k, params)) + "\n";
    }
    atomic_write(dir / "dispersion.csv", csv);
    sidecar["files"] = {{{"name", "dispersion.csv"},
                         {"format", "csv"},
                         {"columns", {"k", "omega", "group_velocity"}},
                         {"rows", resolution}}};
  } else {
    const AutomatonParams2D<double> params(mass, chi);
    sidecar["chi"] = {params.chi().real(), params.chi().imag()};
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> omega(resolution, resolution);
    std::vector<double> axis;
    for (Index i = 0; i < resolution; ++i) axis.push_back(brillouin_axis_value<double>(i, resolution));
    for (Index iy = 0; iy < resolution; ++iy) {
      for (Index ix = 0; ix < resolution; ++ix) omega(iy, ix) = dispersion_2d(axis[ix], axis[iy], params);
    }
    sidecar["k_axis"] = axis;
    sidecar["branch"] = "arcsin(n (cos kx + cos ky) / 2), values in [-pi/2, pi/2]";
    sidecar["files"] = {write_grid(dir, "dispersion_omega.f64", omega)};
  }
  atomic_write(dir / "dispersion.json", sidecar.dump(2) + "\n");
  return sidecar;
}

json to_json(const AsymptoticComparison<double>& r) {
  return {{"discrepancy", r.discrepancy},
          {"off_band_weight_initial", r.off_band_weight_initial},
          {"off_band_weight_final", r.off_band_weight_final},
          {"lattice_length", r.lattice_length},
          {"k0", r.coefficients.k0},
          {"mass", r.coefficients.mass},
          {"band", r.coefficients.band},
          {"envelope_drift", r.coefficients.drift},
          {"diffusion", r.coefficients.diffusion},
          {"omega0", r.coefficients.omega0},
          {"closed_form_drift", r.drift.closed_form},
          {"group_velocity", r.drift.group_velocity}};
}

}  // namespace qca::scenario

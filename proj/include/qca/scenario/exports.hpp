#pragma once

#include <filesystem>

#include <json.hpp>

#include "qca/asymptotics.hpp"
#include "qca/dirac2d.hpp"
#include "qca/scenario/config.hpp"

namespace qca::scenario {

/// vx, vy and |v_g| on a res x res Brillouin grid, written as
/// group_velocity_{vx,vy,speed}.f64 with a group_velocity.json sidecar.
nlohmann::json export_group_velocity_surface(const AutomatonParams2D<double>& params, Index resolution,
                                             const std::filesystem::path& dir);

/// Same, taking mass, chi and resolution (default 128) from a 2D config.
nlohmann::json export_group_velocity_surface(const ScenarioConfig& config,
                                             const std::filesystem::path& dir);

/// 1D: dispersion.csv with k,omega,group_velocity on `resolution` points.
/// 2D: dispersion_omega.f64 (the + branch of arcsin) on a res x res grid.
/// Both come with a dispersion.json sidecar.
nlohmann::json export_dispersion(int dimension, double mass, std::complex<double> chi, Index resolution,
                                 const std::filesystem::path& dir);

nlohmann::json to_json(const AsymptoticComparison<double>& comparison);

}  // namespace qca::scenario

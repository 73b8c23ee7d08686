#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qca/dirac2d.hpp"
#include "qca/scenario/config.hpp"

namespace qca::scenario {

inline constexpr int kFormatVersion = 1;

/// Final probability maps, flattened with x fastest (index x + Lx * y).
struct ProbabilityMaps {
  std::vector<Index> shape;  // {L} or {Lx, Ly}
  Eigen::ArrayXd total, up, down;
};

struct PeakSample {
  Index step = 0;
  std::array<Index, 2> site{0, 0};
  double value = 0;
};

struct RunRecord {
  int format_version = kFormatVersion;
  ScenarioConfig config;
  std::vector<double> norms;  // t = 0 .. T
  ProbabilityMaps final_maps;
  std::vector<PeakSample> peak_trajectory;
  std::optional<double> engine_difference;  // max |stencil - spectral| at T
  std::optional<GroupVelocityField<double>> group_velocity;
  std::map<std::string, double> timings_ms;
};

/// Site of the largest entry of a flattened map. Ties go to the smallest
/// coordinate tuple (x, y) in lexicographic order.
PeakSample argmax_site(const Eigen::ArrayXd& map, const std::vector<Index>& shape);

/// Argmax site of every recorded map, step numbers 0, 1, ...
std::vector<PeakSample> track_packet_peak(const std::vector<Eigen::ArrayXd>& maps,
                                          const std::vector<Index>& shape);

/// Least-squares slope of the peak coordinates against the step number, one
/// entry per axis. Periodic jumps are unwrapped with the minimum-image rule.
std::vector<double> fit_peak_velocity(const std::vector<PeakSample>& trajectory,
                                      const std::vector<Index>& shape);

/// Validates and executes a scenario. With Engine::both the stencil supplies
/// the observables and the spectral engine must agree within 1e-10 at T.
RunRecord run(const ScenarioConfig& config);

}  // namespace qca::scenario

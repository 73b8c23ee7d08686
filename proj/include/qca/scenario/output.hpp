#pragma once

#include <filesystem>
#include <span>
#include <string>

#include <json.hpp>

#include "qca/scenario/run.hpp"

namespace qca::scenario {

/// Writes to "<path>.tmp" and renames over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& bytes);

/// Round-trip decimal form used in every CSV payload.
std::string format_number(double value);

/// Little-endian IEEE-754 doubles, in the given order.
std::string encode_f64(std::span<const double> values);

/// Writes run.json plus the data payloads selected by the observables:
///   norm_trace.csv            step,norm
///   peak_trajectory.csv       step,x[,y],value
///   probability_final.csv     x,total,up,down                    (1D)
///   probability_{total,up,down}.f64  row-major [Ly][Lx] doubles   (2D)
///   group_velocity_{vx,vy,speed}.f64 row-major [ky][kx] doubles
/// Returns the sidecar document.
nlohmann::json write_run_outputs(const RunRecord& record, const std::filesystem::path& dir);

/// Reads a little-endian f64 file back; used by tests and checks.
std::vector<double> read_f64(const std::filesystem::path& path);

}  // namespace qca::scenario

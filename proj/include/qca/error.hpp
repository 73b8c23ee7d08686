#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qca {

/// Failure categories. The CLI reports these names verbatim.
enum class ErrorKind {
  domain,          // parameter outside its mathematical domain
  out_of_range,    // index or physical value outside the lattice / bound
  seam_leakage,    // packet envelope not negligible at the periodic seam
  singular,        // formula evaluated at a singular point
  wrap_risk,       // causal cone would wrap around the periodic lattice
  config,          // malformed scenario configuration
  io,              // filesystem failure
  engine_mismatch  // stencil and spectral engines disagree
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::out_of_range: return "out_of_range";
    case ErrorKind::seam_leakage: return "seam_leakage";
    case ErrorKind::singular: return "singular";
    case ErrorKind::wrap_risk: return "wrap_risk";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::engine_mismatch: return "engine_mismatch";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qca

#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qca/lattice.hpp"

namespace qca {

/// Gaussian packet description. `width` is the standard deviation of the
/// amplitude envelope exp(-d^2 / (4 width^2)), so the probability density has
/// standard deviation width / sqrt(2) per axis. An infinite width denotes a
/// plane wave.
template <typename Scalar, int Dim>
struct WavepacketSpec {
  using Complex = std::complex<Scalar>;
  using Spinor = Eigen::Matrix<Complex, 2 * Dim, 1>;

  std::array<Scalar, Dim> center{};
  std::array<Scalar, Dim> width{};
  std::array<Scalar, Dim> momentum{};
  Spinor polarization = Spinor::Unit(0);
  int band = 1;
};

template <typename Scalar = double>
using WavepacketSpec1D = WavepacketSpec<Scalar, 1>;
template <typename Scalar = double>
using WavepacketSpec2D = WavepacketSpec<Scalar, 2>;

/// Envelope value below which a packet is considered absent.
inline constexpr double kEnvelopeCutoff = 1e-12;

/// Distance from the center beyond which the envelope drops below the cutoff.
template <typename Scalar>
Scalar envelope_radius(Scalar width) {
  using std::log;
  using std::sqrt;
  return Scalar(2) * width * sqrt(-log(Scalar(kEnvelopeCutoff)));
}

/// Number of sites per axis on which the packet is non-negligible.
template <typename Scalar>
Index envelope_support(Scalar width) {
  if (!std::isfinite(width)) return std::numeric_limits<Index>::max();
  return 2 * static_cast<Index>(std::ceil(envelope_radius(width))) + 1;
}

/// Coordinate of site x on a ring of length L, unwrapped to lie within half
/// a period of `center`.
template <typename Scalar>
Scalar unwrap_about(Index x, Scalar center, Index length) {
  const Scalar period = Scalar(length);
  Scalar d = std::fmod(Scalar(x) - center, period);
  if (d >= period / 2) d -= period;
  if (d < -period / 2) d += period;
  return center + d;
}

namespace detail {

template <typename Scalar, int Dim>
void validate(const WavepacketSpec<Scalar, Dim>& spec, const std::array<Index, Dim>& extents) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (spec.band != 1 && spec.band != -1) {
    throw Error(ErrorKind::domain, "wavepacket band must be +1 or -1");
  }
  require_unit_spinor(spec.polarization);
  for (int a = 0; a < Dim; ++a) {
    const Scalar width = spec.width[a];
    const Scalar k0 = spec.momentum[a];
    if (!(width > 0)) throw Error(ErrorKind::domain, "wavepacket width must be > 0");
    if (!(std::abs(k0) <= pi)) {
      throw Error(ErrorKind::domain, "wavepacket momentum must lie in [-pi, pi]");
    }
    const Scalar length = Scalar(extents[a]);
    if (std::isinf(width)) {
      // A plane wave only fits the ring when its momentum is a lattice momentum.
      const Scalar j = k0 * length / (2 * pi);
      if (std::abs(j - std::round(j)) > Scalar(1e-9)) {
        throw Error(ErrorKind::domain,
                    "plane-wave momentum is not commensurate with the lattice");
      }
    } else {
      const Scalar half = length / 2;
      const Scalar seam = std::exp(-half * half / (4 * width * width));
      if (seam > Scalar(kEnvelopeCutoff)) {
        throw Error(ErrorKind::seam_leakage,
                    "wavepacket envelope reaches the periodic seam (relative amplitude " +
                        std::to_string(seam) + " > 1e-12); enlarge the lattice or narrow "
                        "the packet");
      }
    }
  }
}

// Envelope and carrier phase along one axis.
template <typename Scalar>
std::complex<Scalar> axis_profile(Index x, Index length, Scalar center, Scalar width,
                                  Scalar k0) {
  if (std::isinf(width)) return std::polar(Scalar(1), k0 * Scalar(x));
  const Scalar u = unwrap_about(x, center, length);
  const Scalar d = u - center;
  return std::polar(std::exp(-d * d / (4 * width * width)), k0 * u);
}

}  // namespace detail

/// Normalized Gaussian wavepacket: envelope times carrier exp(i k0 x) times
/// polarization. Throws seam_leakage if the packet does not fit the ring.
template <typename Scalar>
SpinorField1D<Scalar> gaussian_packet(const Lattice1D& lattice,
                                      const WavepacketSpec1D<Scalar>& spec) {
  detail::validate<Scalar, 1>(spec, {lattice.length()});
  SpinorField1D<Scalar> field(lattice);
  for (Index x = 0; x < lattice.length(); ++x) {
    field.site(x) = detail::axis_profile(x, lattice.length(), spec.center[0], spec.width[0],
                                         spec.momentum[0]) *
                    spec.polarization;
  }
  return normalized(field);
}

template <typename Scalar>
SpinorField2D<Scalar> gaussian_packet(const Lattice2D& lattice,
                                      const WavepacketSpec2D<Scalar>& spec) {
  detail::validate<Scalar, 2>(spec, {lattice.lx(), lattice.ly()});
  SpinorField2D<Scalar> field(lattice);
  for (Index y = 0; y < lattice.ly(); ++y) {
    const auto py =
        detail::axis_profile(y, lattice.ly(), spec.center[1], spec.width[1], spec.momentum[1]);
    for (Index x = 0; x < lattice.lx(); ++x) {
      const auto px = detail::axis_profile(x, lattice.lx(), spec.center[0], spec.width[0],
                                           spec.momentum[0]);
      field.site(lattice.index(x, y)) = (px * py) * spec.polarization;
    }
  }
  return normalized(field);
}

}  // namespace qca

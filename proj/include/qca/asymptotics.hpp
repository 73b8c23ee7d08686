#pragma once

#include <cmath>
#include <numbers>

#include "qca/dirac1d.hpp"
#include "qca/wavepacket.hpp"

namespace qca {

/// Drift coefficient in the printed closed form sqrt(n / (1 + m^2 cot^2 k0)).
/// Singular at k0 in {0, +-pi}.
template <typename Scalar>
Scalar drift_coefficient(Scalar k0, Scalar mass) {
  const AutomatonParams1D<Scalar> params(mass);
  const Scalar s = std::sin(k0);
  if (std::abs(s) < Scalar(1e-12)) {
    throw Error(ErrorKind::singular, "drift coefficient is singular at k0 = 0, +-pi");
  }
  const Scalar cot = std::cos(k0) / s;
  return std::sqrt(params.n() / (1 + mass * mass * cot * cot));
}

/// The printed drift next to the transport speed d omega / dk. The two differ
/// (sqrt(n) against n at k0 = pi/2); the comparator uses the latter.
template <typename Scalar>
struct DriftDiagnostic {
  Scalar closed_form = 0;
  Scalar group_velocity = 0;
  Scalar difference() const { return closed_form - group_velocity; }
};

template <typename Scalar>
DriftDiagnostic<Scalar> drift_diagnostic(Scalar k0, Scalar mass) {
  return {drift_coefficient(k0, mass), group_velocity_1d(k0, AutomatonParams1D<Scalar>(mass))};
}

/// D(k0, m) = n m^2 cos k0 / (sin^2 k0 + m^2 cos^2 k0)^{3/2}, which equals
/// d^2 omega / dk^2 of the 1D dispersion.
template <typename Scalar>
Scalar diffusion_coefficient(Scalar k0, Scalar mass) {
  const AutomatonParams1D<Scalar> params(mass);
  const Scalar s = std::sin(k0);
  const Scalar c = std::cos(k0);
  const Scalar denom = s * s + mass * mass * c * c;
  if (denom < Scalar(1e-24)) {
    throw Error(ErrorKind::singular, "diffusion coefficient is singular for m = 0, k0 = 0, +-pi");
  }
  return params.n() * mass * mass * c / std::pow(denom, Scalar(1.5));
}

/// Coefficients of the envelope equation
///   i d/dt phi~ = s (i v d/dx - D/2 d^2/dx^2) phi~,
///   phi~(x, t) = phi(x, t) exp(-i [k0 x - omega(k0) t]).
template <typename Scalar = double>
struct DriftDiffusionParams {
  Scalar k0 = 0;
  Scalar mass = 0;
  int band = 1;
  Scalar drift = 0;      // v, sites per step
  Scalar diffusion = 0;  // D, sites^2 per step
  Scalar omega0 = 0;     // dispersion_1d(k0)
};

/// Coefficients matched to the automaton band of energy s * omega(k) around
/// k0. Under the library Fourier convention the envelope equation moves
/// packets by -s v t, so matching the band transport +s omega'(k0) t needs
/// v = -omega'(k0); D is the closed form above.
template <typename Scalar>
DriftDiffusionParams<Scalar> fermi_scale_params(Scalar k0, Scalar mass, int band) {
  if (band != 1 && band != -1) throw Error(ErrorKind::domain, "band must be +1 or -1");
  const AutomatonParams1D<Scalar> params(mass);
  DriftDiffusionParams<Scalar> out;
  out.k0 = k0;
  out.mass = mass;
  out.band = band;
  out.drift = -group_velocity_1d(k0, params);
  out.diffusion = diffusion_coefficient(k0, mass);
  out.omega0 = dispersion_1d(k0, params);
  return out;
}

/// Exact solution of the envelope equation on the ring: mode q picks up
/// exp(-i s (-v q + D q^2 / 2) t). Norm is preserved exactly.
template <typename Scalar>
ScalarField1D<Scalar> evolve_drift_diffusion(const ScalarField1D<Scalar>& envelope,
                                             const DriftDiffusionParams<Scalar>& params,
                                             Scalar t) {
  auto modes = dft_forward(envelope);
  const Index length = envelope.lattice().length();
  const Scalar s = Scalar(params.band);
  for (Index slot = 0; slot < length; ++slot) {
    const Scalar q = lattice_momentum<Scalar>(slot, length);
    const Scalar energy = s * (-params.drift * q + params.diffusion * q * q / 2);
    modes.values()(0, slot) *= std::polar(Scalar(1), -energy * t);
  }
  return dft_inverse(modes);
}

/// min over global phases theta of || a - e^{i theta} b ||, evaluated from the
/// explicit difference so that tiny discrepancies are not lost to cancellation.
template <typename Scalar, int C, typename L>
Scalar phase_aligned_distance(const SpinorField<Scalar, C, L>& a,
                              const SpinorField<Scalar, C, L>& b) {
  const std::complex<Scalar> overlap =
      (b.values().conjugate().cwiseProduct(a.values())).sum();
  const std::complex<Scalar> phase =
      std::abs(overlap) > 0 ? overlap / std::abs(overlap) : std::complex<Scalar>(1);
  return std::sqrt((a.values() - phase * b.values()).cwiseAbs2().sum());
}

template <typename Scalar = double>
struct AsymptoticComparison {
  Scalar discrepancy = 0;   // phase-aligned L2 distance after T steps
  Scalar off_band_weight_initial = 0;
  Scalar off_band_weight_final = 0;
  DriftDiffusionParams<Scalar> coefficients;
  DriftDiagnostic<Scalar> drift;
  Index lattice_length = 0;
};

/// Smallest ring on which the packet plus its T-step causal cone fit without
/// wrapping: L > 2T + support, rounded up to a power of two.
template <typename Scalar>
Index comparison_lattice_length(Scalar width, Index steps) {
  const Index needed = 2 * steps + envelope_support(width) + 1;
  Index length = 2;
  while (length < needed) length *= 2;
  // The envelope must also be negligible across the seam.
  while (std::exp(-Scalar(length * length) / (16 * width * width)) > Scalar(kEnvelopeCutoff)) {
    length *= 2;
  }
  return length;
}

namespace detail {
template <typename Scalar>
Scalar off_band_weight(const SpinorField1D<Scalar>& field, const AutomatonParams1D<Scalar>& params,
                       int band) {
  const auto modes = dft_forward(field);
  const auto kernel = build_kernel_1d(params);
  const Index length = field.lattice().length();
  Scalar weight = 0;
  for (Index slot = 0; slot < length; ++slot) {
    const Scalar k = lattice_momentum<Scalar>(slot, length);
    const auto projector = band_projector(kernel(k), dispersion_1d(k, params), -band);
    weight += (projector * modes.site(slot)).squaredNorm();
  }
  return weight;
}
}  // namespace detail

/// Evolve a band-s Gaussian packet T steps with the exact automaton and with
/// the envelope equation (carrier phase reattached), and report their distance.
/// The packet polarization is replaced by the U(k0) eigenvector of band s.
template <typename Scalar>
AsymptoticComparison<Scalar> compare_to_automaton(const Lattice1D& lattice,
                                                  WavepacketSpec1D<Scalar> spec,
                                                  Scalar mass, Index steps) {
  if (steps < 0) throw Error(ErrorKind::domain, "step count must be >= 0");
  const Index support = envelope_support(spec.width[0]);
  if (lattice.length() <= 2 * steps + support) {
    throw Error(ErrorKind::wrap_risk,
                "lattice too small for the packet's causal cone: need L > 2T + support = " +
                    std::to_string(2 * steps + support));
  }
  const AutomatonParams1D<Scalar> params(mass);
  const Scalar k0 = spec.momentum[0];
  spec.polarization = band_spinor_1d(k0, params, spec.band);
  const auto initial = gaussian_packet(lattice, spec);
  const auto propagator = make_propagator_1d(lattice, params);
  const auto exact = propagator.evolve(initial, steps);

  AsymptoticComparison<Scalar> result;
  result.coefficients = fermi_scale_params(k0, mass, spec.band);
  result.drift = drift_diagnostic(k0, mass);
  result.lattice_length = lattice.length();

  // Strip polarization and carrier, evolve the envelope, reattach both.
  const Index length = lattice.length();
  ScalarField1D<Scalar> envelope(lattice);
  for (Index x = 0; x < length; ++x) {
    const Scalar u = unwrap_about(x, spec.center[0], length);
    envelope.values()(0, x) =
        spec.polarization.dot(initial.site(x)) * std::polar(Scalar(1), -k0 * u);
  }
  const auto evolved =
      evolve_drift_diffusion(envelope, result.coefficients, Scalar(steps));
  const Scalar carrier_time = -Scalar(spec.band) * result.coefficients.omega0 * Scalar(steps);
  SpinorField1D<Scalar> approx(lattice);
  for (Index x = 0; x < length; ++x) {
    const Scalar u = unwrap_about(x, spec.center[0], length);
    approx.site(x) = evolved.values()(0, x) * std::polar(Scalar(1), k0 * u + carrier_time) *
                     spec.polarization;
  }

  result.discrepancy = phase_aligned_distance(exact, approx);
  result.off_band_weight_initial = detail::off_band_weight(initial, params, spec.band);
  result.off_band_weight_final = detail::off_band_weight(exact, params, spec.band);
  return result;
}

/// Convenience overload that sizes the lattice from the packet width and T.
template <typename Scalar>
AsymptoticComparison<Scalar> compare_to_automaton(const WavepacketSpec1D<Scalar>& spec,
                                                  Scalar mass, Index steps) {
  const Lattice1D lattice(comparison_lattice_length(spec.width[0], steps));
  auto centered = spec;
  centered.center[0] = Scalar(lattice.length() / 2);
  return compare_to_automaton(lattice, centered, mass, steps);
}

}  // namespace qca

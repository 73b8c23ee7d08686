#pragma once

#include <cmath>
#include <complex>

#include "qca/spectral.hpp"

namespace qca {

/// Adimensional mass 0 <= m <= 1 and the hopping amplitude n = sqrt(1 - m^2).
/// m = 1 is the Planck-mass bound; larger values would make the step
/// non-unitary.
template <typename Scalar = double>
class AutomatonParams1D {
 public:
  explicit AutomatonParams1D(Scalar mass) : mass_(mass) {
    if (!(mass >= 0 && mass <= 1)) {
      throw Error(ErrorKind::domain,
                  "automaton mass must lie in [0, 1], got " + std::to_string(mass));
    }
    n_ = std::sqrt(Scalar(1) - mass * mass);
  }

  Scalar mass() const noexcept { return mass_; }
  Scalar n() const noexcept { return n_; }

 private:
  Scalar mass_;
  Scalar n_;
};

template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

/// k -> U(k) = [[n e^{ik}, i m], [i m, n e^{-ik}]]. The left shift
/// (S psi)(x) = psi(x+1) is diagonal with eigenvalue e^{ik} under the library
/// Fourier convention.
template <typename Scalar = double>
class MomentumKernel1D {
 public:
  explicit MomentumKernel1D(const AutomatonParams1D<Scalar>& params) : params_(params) {}

  const AutomatonParams1D<Scalar>& params() const noexcept { return params_; }

  Matrix2c<Scalar> operator()(Scalar k) const {
    const std::complex<Scalar> im_mass(0, params_.mass());
    const Scalar n = params_.n();
    Matrix2c<Scalar> u;
    u << n * std::polar(Scalar(1), k), im_mass,
         im_mass, n * std::polar(Scalar(1), -k);
    return u;
  }

 private:
  AutomatonParams1D<Scalar> params_;
};

template <typename Scalar>
MomentumKernel1D<Scalar> build_kernel_1d(const AutomatonParams1D<Scalar>& params) {
  return MomentumKernel1D<Scalar>(params);
}

/// One automaton step in position space:
///   up'(x)   = n up(x+1)  + i m down(x)
///   down'(x) = i m up(x)  + n down(x-1)
template <typename Scalar>
SpinorField1D<Scalar> step_1d(const SpinorField1D<Scalar>& field,
                              const AutomatonParams1D<Scalar>& params) {
  const auto& lattice = field.lattice();
  const Index length = lattice.length();
  const auto& in = field.values();
  SpinorField1D<Scalar> out(lattice);
  auto& v = out.values();
  const std::complex<Scalar> im_mass(0, params.mass());
  const Scalar n = params.n();
  for (Index x = 0; x < length; ++x) {
    const Index right = x + 1 == length ? 0 : x + 1;
    const Index left = x == 0 ? length - 1 : x - 1;
    v(0, x) = n * in(0, right) + im_mass * in(1, x);
    v(1, x) = im_mass * in(0, x) + n * in(1, left);
  }
  return out;
}

template <typename Scalar>
SpectralPropagator<Scalar, Lattice1D> make_propagator_1d(const Lattice1D& lattice,
                                                         const AutomatonParams1D<Scalar>& params) {
  return SpectralPropagator<Scalar, Lattice1D>(lattice, build_kernel_1d(params));
}

/// Exact T-step evolution in momentum space; agrees with T calls of step_1d.
template <typename Scalar>
SpinorField1D<Scalar> step_1d_spectral(const SpinorField1D<Scalar>& field,
                                       const AutomatonParams1D<Scalar>& params, Index steps) {
  if (steps < 0) throw Error(ErrorKind::domain, "step count must be >= 0");
  if (steps == 0) return field;
  return make_propagator_1d(field.lattice(), params).evolve(field, steps);
}

/// Eigenphase omega(k) = arccos(n cos k) in [0, pi]; the eigenvalues of U(k)
/// are exp(+-i omega). Evaluated as atan2 using 1 - n^2 cos^2 k =
/// sin^2 k + m^2 cos^2 k, which stays accurate near the band edges.
template <typename Scalar>
Scalar dispersion_1d(Scalar k, const AutomatonParams1D<Scalar>& params) {
  const Scalar m = params.mass();
  const Scalar s = std::sin(k);
  const Scalar c = std::cos(k);
  return std::atan2(std::sqrt(s * s + m * m * c * c), params.n() * c);
}

/// d omega / dk = n sin k / sqrt(sin^2 k + m^2 cos^2 k). Returns 0 at the
/// massless band-touching points k in {0, +-pi}, where omega = |k| has a kink.
template <typename Scalar>
Scalar group_velocity_1d(Scalar k, const AutomatonParams1D<Scalar>& params) {
  const Scalar m = params.mass();
  const Scalar s = std::sin(k);
  const Scalar c = std::cos(k);
  const Scalar denom = std::sqrt(s * s + m * m * c * c);
  if (denom == 0) return 0;
  return params.n() * s / denom;
}

/// Unit eigenvector of U(k) for the eigenvalue exp(-i s omega(k)), i.e. the
/// band of energy s * omega. Deterministic: the basis vector with the larger
/// projection onto the band (lower index on ties) is projected and normalized.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 1> band_spinor_1d(Scalar k,
                                                        const AutomatonParams1D<Scalar>& params,
                                                        int band) {
  const Matrix2c<Scalar> projector =
      band_projector(build_kernel_1d(params)(k), dispersion_1d(k, params), band);
  Index best = 0;
  projector.colwise().norm().maxCoeff(&best);
  return projector.col(best).normalized();
}

}  // namespace qca

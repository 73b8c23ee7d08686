#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "qca/spectral.hpp"

namespace qca {

/// Mass m in [0, 1], n = sqrt(1 - m^2), and the unimodular phase chi that
/// couples the two spinor components inside each chirality block.
template <typename Scalar = double>
class AutomatonParams2D {
 public:
  using Complex = std::complex<Scalar>;

  explicit AutomatonParams2D(Scalar mass, Complex chi = Complex(1, 0)) : mass_(mass) {
    if (!(mass >= 0 && mass <= 1)) {
      throw Error(ErrorKind::domain,
                  "automaton mass must lie in [0, 1], got " + std::to_string(mass));
    }
    const Scalar modulus = std::abs(chi);
    if (!(std::abs(modulus - 1) < Scalar(1e-12))) {
      throw Error(ErrorKind::domain, "chi must have unit modulus");
    }
    chi_ = chi / modulus;
    n_ = std::sqrt(Scalar(1) - mass * mass);
  }

  Scalar mass() const noexcept { return mass_; }
  Scalar n() const noexcept { return n_; }
  Complex chi() const noexcept { return chi_; }

 private:
  Scalar mass_;
  Scalar n_;
  Complex chi_;
};

template <typename Scalar>
using Matrix4c = Eigen::Matrix<std::complex<Scalar>, 4, 4>;

/// Momentum symbols of the diagonal shift combinations,
///   s+-(k) = (e^{i kx} +- e^{-i ky}) / 2,
/// normalized so that |s+|^2 + |s-|^2 = 1.
template <typename Scalar>
std::pair<std::complex<Scalar>, std::complex<Scalar>> shift_symbols(Scalar kx, Scalar ky) {
  const auto ex = std::polar(Scalar(1), kx);
  const auto ey = std::polar(Scalar(1), -ky);
  return {(ex + ey) / Scalar(2), (ex - ey) / Scalar(2)};
}

/// (kx, ky) -> U(k) = [[n A, i m I], [i m I, n A^dagger]] with
/// A = [[s+, chi* conj(s-)], [-chi s-, conj(s+)]] in SU(2).
/// Components 0,1 form the first chirality block, 2,3 the second.
template <typename Scalar = double>
class MomentumKernel2D {
 public:
  explicit MomentumKernel2D(const AutomatonParams2D<Scalar>& params) : params_(params) {}

  const AutomatonParams2D<Scalar>& params() const noexcept { return params_; }

  Eigen::Matrix<std::complex<Scalar>, 2, 2> block(Scalar kx, Scalar ky) const {
    const auto [sp, sm] = shift_symbols(kx, ky);
    const auto chi = params_.chi();
    Eigen::Matrix<std::complex<Scalar>, 2, 2> a;
    a << sp, std::conj(chi) * std::conj(sm),
         -chi * sm, std::conj(sp);
    return a;
  }

  Matrix4c<Scalar> operator()(Scalar kx, Scalar ky) const {
    using Complex = std::complex<Scalar>;
    const auto a = block(kx, ky);
    const Scalar n = params_.n();
    const Complex im_mass(0, params_.mass());
    Matrix4c<Scalar> u;
    u.template topLeftCorner<2, 2>() = n * a;
    u.template bottomRightCorner<2, 2>() = n * a.adjoint();
    u.template topRightCorner<2, 2>() = im_mass * Eigen::Matrix<Complex, 2, 2>::Identity();
    u.template bottomLeftCorner<2, 2>() = im_mass * Eigen::Matrix<Complex, 2, 2>::Identity();
    return u;
  }

 private:
  AutomatonParams2D<Scalar> params_;
};

template <typename Scalar>
MomentumKernel2D<Scalar> build_kernel_2d(const AutomatonParams2D<Scalar>& params) {
  return MomentumKernel2D<Scalar>(params);
}

/// One automaton step in position space. Neighbour convention: S_x reads
/// (x+1, y), so states move toward -x; S_y^dagger reads (x, y-1), so states
/// move toward +y.
template <typename Scalar>
SpinorField2D<Scalar> step_2d(const SpinorField2D<Scalar>& field,
                              const AutomatonParams2D<Scalar>& params) {
  using Complex = std::complex<Scalar>;
  const auto& lattice = field.lattice();
  const Index lx = lattice.lx();
  const Index ly = lattice.ly();
  const auto& in = field.values();
  SpinorField2D<Scalar> out(lattice);
  auto& v = out.values();

  const Scalar half_n = params.n() / 2;
  const Complex im_mass(0, params.mass());
  const Complex chi = params.chi();
  const Complex chi_conj = std::conj(chi);

  for (Index y = 0; y < ly; ++y) {
    const Index yu = y + 1 == ly ? 0 : y + 1;
    const Index yd = y == 0 ? ly - 1 : y - 1;
    for (Index x = 0; x < lx; ++x) {
      const Index xr = x + 1 == lx ? 0 : x + 1;
      const Index xl = x == 0 ? lx - 1 : x - 1;
      const Index here = x + lx * y;
      const Index right = xr + lx * y;
      const Index left = xl + lx * y;
      const Index up = x + lx * yu;
      const Index down = x + lx * yd;

      // 2 S+ f = f(right) + f(down), 2 S- f = f(right) - f(down),
      // 2 S+^dag f = f(left) + f(up), 2 S-^dag f = f(left) - f(up).
      auto plus = [&](int c) { return in(c, right) + in(c, down); };
      auto minus = [&](int c) { return in(c, right) - in(c, down); };
      auto plus_dag = [&](int c) { return in(c, left) + in(c, up); };
      auto minus_dag = [&](int c) { return in(c, left) - in(c, up); };

      v(0, here) = half_n * (plus(0) + chi_conj * minus_dag(1)) + im_mass * in(2, here);
      v(1, here) = half_n * (-chi * minus(0) + plus_dag(1)) + im_mass * in(3, here);
      v(2, here) = im_mass * in(0, here) + half_n * (plus_dag(2) - chi_conj * minus_dag(3));
      v(3, here) = im_mass * in(1, here) + half_n * (chi * minus(2) + plus(3));
    }
  }
  return out;
}

template <typename Scalar>
SpectralPropagator<Scalar, Lattice2D> make_propagator_2d(const Lattice2D& lattice,
                                                         const AutomatonParams2D<Scalar>& params) {
  return SpectralPropagator<Scalar, Lattice2D>(lattice, build_kernel_2d(params));
}

template <typename Scalar>
SpinorField2D<Scalar> step_2d_spectral(const SpinorField2D<Scalar>& field,
                                       const AutomatonParams2D<Scalar>& params, Index steps) {
  if (steps < 0) throw Error(ErrorKind::domain, "step count must be >= 0");
  if (steps == 0) return field;
  return make_propagator_2d(field.lattice(), params).evolve(field, steps);
}

namespace detail {
// u = (n/2)(cos kx + cos ky) and 1 - u^2 evaluated without cancellation:
// 1 - c^2 = (sin^2(kx/2) + sin^2(ky/2)) (cos^2(kx/2) + cos^2(ky/2)), c = u/n.
template <typename Scalar>
std::pair<Scalar, Scalar> dispersion_argument(Scalar kx, Scalar ky, Scalar n, Scalar m) {
  const Scalar c = (std::cos(kx) + std::cos(ky)) / 2;
  const Scalar sx = std::sin(kx / 2), sy = std::sin(ky / 2);
  const Scalar cx = std::cos(kx / 2), cy = std::cos(ky / 2);
  const Scalar one_minus_c2 = (sx * sx + sy * sy) * (cx * cx + cy * cy);
  return {n * c, one_minus_c2 + m * m * c * c};
}
}  // namespace detail

/// Dispersion arcsin[(n/2)(cos kx + cos ky)], the + branch, in [-pi/2, pi/2].
/// It is nonnegative wherever cos kx + cos ky >= 0.
template <typename Scalar>
Scalar dispersion_2d(Scalar kx, Scalar ky, const AutomatonParams2D<Scalar>& params) {
  const auto [u, one_minus_u2] = detail::dispersion_argument(kx, ky, params.n(), params.mass());
  return std::atan2(u, std::sqrt(one_minus_u2));
}

/// Kernel eigenphase omega(k) = arccos[(n/2)(cos kx + cos ky)] in [0, pi].
/// U(k) has eigenvalues exp(+-i omega), each doubly degenerate, and
/// omega = pi/2 - dispersion_2d(k).
template <typename Scalar>
Scalar eigenphase_2d(Scalar kx, Scalar ky, const AutomatonParams2D<Scalar>& params) {
  const auto [u, one_minus_u2] = detail::dispersion_argument(kx, ky, params.n(), params.mass());
  return std::atan2(std::sqrt(one_minus_u2), u);
}

template <typename Scalar>
struct GroupVelocity2D {
  Scalar vx = 0;
  Scalar vy = 0;
  Scalar speed() const { return std::hypot(vx, vy); }
};

/// Gradient of eigenphase_2d:
///   (n/2)(sin kx, sin ky) / sqrt(1 - (n/2)^2 (cos kx + cos ky)^2),
/// the velocity of the band with energy +omega. Equals minus the gradient of
/// dispersion_2d. Returns (0, 0) at the massless cone points where the
/// denominator vanishes.
template <typename Scalar>
GroupVelocity2D<Scalar> group_velocity_2d(Scalar kx, Scalar ky,
                                          const AutomatonParams2D<Scalar>& params) {
  const auto [u, one_minus_u2] = detail::dispersion_argument(kx, ky, params.n(), params.mass());
  if (one_minus_u2 == 0) return {};
  const Scalar scale = params.n() / (2 * std::sqrt(one_minus_u2));
  return {scale * std::sin(kx), scale * std::sin(ky)};
}

/// Group velocity sampled on the periodic Brillouin grid k = 2 pi j / N,
/// j in {-N/2, ..., N/2 - 1}, ascending. Arrays are row-major: row = ky index,
/// column = kx index.
template <typename Scalar = double>
struct GroupVelocityField {
  Index resolution = 0;
  std::vector<Scalar> k;  // axis values, ascending
  Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> vx, vy, speed;
};

template <typename Scalar>
Scalar brillouin_axis_value(Index i, Index resolution) {
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(i - resolution / 2) /
         Scalar(resolution);
}

template <typename Scalar>
GroupVelocityField<Scalar> group_velocity_field(const AutomatonParams2D<Scalar>& params,
                                                Index resolution) {
  if (resolution < 16) {
    throw Error(ErrorKind::domain, "group velocity grid resolution must be >= 16");
  }
  GroupVelocityField<Scalar> field;
  field.resolution = resolution;
  field.k.resize(static_cast<std::size_t>(resolution));
  for (Index i = 0; i < resolution; ++i) field.k[i] = brillouin_axis_value<Scalar>(i, resolution);
  field.vx.resize(resolution, resolution);
  field.vy.resize(resolution, resolution);
  field.speed.resize(resolution, resolution);
  for (Index iy = 0; iy < resolution; ++iy) {
    for (Index ix = 0; ix < resolution; ++ix) {
      const auto v = group_velocity_2d(field.k[ix], field.k[iy], params);
      field.vx(iy, ix) = v.vx;
      field.vy(iy, ix) = v.vy;
      field.speed(iy, ix) = v.speed();
    }
  }
  return field;
}

/// max |v| / min |v| over `samples` equally spaced directions on |k| = radius.
template <typename Scalar>
Scalar anisotropy_ratio(const AutomatonParams2D<Scalar>& params, Scalar radius,
                        Index samples = 720) {
  Scalar lo = std::numeric_limits<Scalar>::infinity();
  Scalar hi = 0;
  for (Index i = 0; i < samples; ++i) {
    const Scalar phi = 2 * std::numbers::pi_v<Scalar> * Scalar(i) / Scalar(samples);
    const Scalar speed =
        group_velocity_2d(radius * std::cos(phi), radius * std::sin(phi), params).speed();
    lo = std::min(lo, speed);
    hi = std::max(hi, speed);
  }
  return hi / lo;
}

/// Unit vector in the eigenspace of exp(-i s omega(k)) (energy s * omega).
/// The eigenspace is two-dimensional; the basis vector with the largest
/// projection (lowest index on ties) is projected and normalized.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 4, 1> band_spinor_2d(Scalar kx, Scalar ky,
                                                        const AutomatonParams2D<Scalar>& params,
                                                        int band) {
  const Matrix4c<Scalar> projector =
      band_projector(build_kernel_2d(params)(kx, ky), eigenphase_2d(kx, ky, params), band);
  Index best = 0;
  projector.colwise().norm().maxCoeff(&best);
  return projector.col(best).normalized();
}

/// Spin-up probability per site: |psi_0|^2 + |psi_2|^2, the first component
/// of each chirality block. Spin-down uses components 1 and 3.
template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> spin_probability_map(const SpinorField2D<Scalar>& field,
                                                             bool up = true) {
  const auto& v = field.values();
  const int first = up ? 0 : 1;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> map(v.cols());
  for (Index i = 0; i < v.cols(); ++i) map(i) = std::norm(v(first, i)) + std::norm(v(first + 2, i));
  return map;
}

}  // namespace qca

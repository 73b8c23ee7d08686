#pragma once

#include <Eigen/Core>

#include <complex>
#include <string>
#include <type_traits>

#include "qca/error.hpp"

namespace qca {

using Index = Eigen::Index;

namespace detail {
inline Index positive_mod(Index value, Index period) {
  const Index r = value % period;
  return r < 0 ? r + period : r;
}
}  // namespace detail

/// Periodic ring of L sites, unit spacing (one Planck length).
class Lattice1D {
 public:
  static constexpr int dimension = 1;

  explicit Lattice1D(Index length) : length_(length) {
    if (length < 2) {
      throw Error(ErrorKind::domain,
                  "Lattice1D length must be >= 2, got " + std::to_string(length));
    }
  }

  Index length() const noexcept { return length_; }
  Index sites() const noexcept { return length_; }
  Index extent(int axis) const noexcept { return axis == 0 ? length_ : 1; }

  Index wrap(Index x) const noexcept { return detail::positive_mod(x, length_); }
  bool contains(Index x) const noexcept { return x >= 0 && x < length_; }

  friend bool operator==(const Lattice1D&, const Lattice1D&) = default;

 private:
  Index length_;
};

/// Periodic Lx x Ly torus. Sites are stored x-fastest: index = x + Lx * y.
class Lattice2D {
 public:
  static constexpr int dimension = 2;

  Lattice2D(Index lx, Index ly) : lx_(lx), ly_(ly) {
    if (lx < 2 || ly < 2) {
      throw Error(ErrorKind::domain, "Lattice2D sizes must be >= 2, got " +
                                         std::to_string(lx) + "x" + std::to_string(ly));
    }
  }

  Index lx() const noexcept { return lx_; }
  Index ly() const noexcept { return ly_; }
  Index sites() const noexcept { return lx_ * ly_; }
  Index extent(int axis) const noexcept { return axis == 0 ? lx_ : ly_; }

  Index wrap_x(Index x) const noexcept { return detail::positive_mod(x, lx_); }
  Index wrap_y(Index y) const noexcept { return detail::positive_mod(y, ly_); }
  Index index(Index x, Index y) const noexcept { return wrap_x(x) + lx_ * wrap_y(y); }
  bool contains(Index x, Index y) const noexcept {
    return x >= 0 && x < lx_ && y >= 0 && y < ly_;
  }

  friend bool operator==(const Lattice2D&, const Lattice2D&) = default;

 private:
  Index lx_;
  Index ly_;
};

enum class Representation { position, momentum };

/// Spinor-valued field on a lattice: one column of `Components` complex
/// amplitudes per site (position space) or per Brillouin mode (momentum space).
template <typename Scalar, int Components, typename LatticeT,
          Representation Rep = Representation::position>
class SpinorField {
 public:
  using RealScalar = Scalar;
  using Complex = std::complex<Scalar>;
  using Lattice = LatticeT;
  using Spinor = Eigen::Matrix<Complex, Components, 1>;
  using Storage = Eigen::Matrix<Complex, Components, Eigen::Dynamic>;
  static constexpr int components = Components;
  static constexpr Representation representation = Rep;

  explicit SpinorField(const Lattice& lattice)
      : lattice_(lattice), values_(Storage::Zero(Components, lattice.sites())) {}

  SpinorField(const Lattice& lattice, Storage values)
      : lattice_(lattice), values_(std::move(values)) {
    if (values_.cols() != lattice_.sites()) {
      throw Error(ErrorKind::domain, "SpinorField storage does not match lattice size");
    }
  }

  const Lattice& lattice() const noexcept { return lattice_; }
  const Storage& values() const noexcept { return values_; }
  Storage& values() noexcept { return values_; }

  auto site(Index i) { return values_.col(i); }
  auto site(Index i) const { return values_.col(i); }

  friend bool operator==(const SpinorField& a, const SpinorField& b) {
    return a.lattice_ == b.lattice_ && a.values_ == b.values_;
  }

 private:
  Lattice lattice_;
  Storage values_;
};

template <typename Scalar = double>
using SpinorField1D = SpinorField<Scalar, 2, Lattice1D>;
template <typename Scalar = double>
using SpinorField2D = SpinorField<Scalar, 4, Lattice2D>;
/// One-component field, used for drift-diffusion envelopes.
template <typename Scalar = double>
using ScalarField1D = SpinorField<Scalar, 1, Lattice1D>;

template <typename Lattice>
struct spinor_components;
template <>
struct spinor_components<Lattice1D> : std::integral_constant<int, 2> {};
template <>
struct spinor_components<Lattice2D> : std::integral_constant<int, 4> {};

/// Field type carried by the Dirac automaton on a given lattice.
template <typename Scalar, typename Lattice>
using DiracField = SpinorField<Scalar, spinor_components<Lattice>::value, Lattice>;

/// Total norm sum_x |psi(x)|^2. Sites are accumulated in storage order so the
/// result is reproducible bit-for-bit.
template <typename Scalar, int C, typename L, Representation R>
Scalar norm(const SpinorField<Scalar, C, L, R>& field) {
  Scalar sum = 0;
  const auto& v = field.values();
  for (Index i = 0; i < v.cols(); ++i) {
    for (int c = 0; c < C; ++c) sum += std::norm(v(c, i));
  }
  return sum;
}

template <typename Scalar, int C, typename L, Representation R>
SpinorField<Scalar, C, L, R> normalized(const SpinorField<Scalar, C, L, R>& field) {
  const Scalar total = norm(field);
  if (!(total > 0)) throw Error(ErrorKind::domain, "cannot normalize a zero field");
  auto values = field.values();
  values /= std::sqrt(total);
  return {field.lattice(), std::move(values)};
}

/// The zero field: the vacuum of the single-particle sector.
template <typename Scalar = double, typename Lattice>
DiracField<Scalar, Lattice> vacuum(const Lattice& lattice) {
  return DiracField<Scalar, Lattice>(lattice);
}

namespace detail {
template <typename Derived>
void require_unit_spinor(const Eigen::MatrixBase<Derived>& spinor) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (std::abs(spinor.squaredNorm() - Real(1)) > Real(1e-12)) {
    throw Error(ErrorKind::domain, "spinor must have unit norm");
  }
}
}  // namespace detail

/// State localized on a single site.
template <typename Scalar>
SpinorField1D<Scalar> delta_state(const Lattice1D& lattice, Index x,
                                  const typename SpinorField1D<Scalar>::Spinor& spinor) {
  if (!lattice.contains(x)) {
    throw Error(ErrorKind::out_of_range, "delta_state site " + std::to_string(x) +
                                             " outside lattice of length " +
                                             std::to_string(lattice.length()));
  }
  detail::require_unit_spinor(spinor);
  SpinorField1D<Scalar> field(lattice);
  field.site(x) = spinor;
  return field;
}

template <typename Scalar>
SpinorField2D<Scalar> delta_state(const Lattice2D& lattice, Index x, Index y,
                                  const typename SpinorField2D<Scalar>::Spinor& spinor) {
  if (!lattice.contains(x, y)) {
    throw Error(ErrorKind::out_of_range, "delta_state site (" + std::to_string(x) + "," +
                                             std::to_string(y) + ") outside lattice");
  }
  detail::require_unit_spinor(spinor);
  SpinorField2D<Scalar> field(lattice);
  field.site(lattice.index(x, y)) = spinor;
  return field;
}

/// Squared magnitude per component and site (Components x sites).
template <typename Scalar, int C, typename L>
Eigen::Array<Scalar, C, Eigen::Dynamic> component_probability(
    const SpinorField<Scalar, C, L>& field) {
  return field.values().array().abs2();
}

/// Probability per site, summed over spinor components.
template <typename Scalar, int C, typename L>
Eigen::Array<Scalar, Eigen::Dynamic, 1> probability_map(const SpinorField<Scalar, C, L>& field) {
  const auto& v = field.values();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> map(v.cols());
  for (Index i = 0; i < v.cols(); ++i) {
    Scalar p = 0;
    for (int c = 0; c < C; ++c) p += std::norm(v(c, i));
    map(i) = p;
  }
  return map;
}

/// Translation g(x) = f(x - shift) on the ring.
template <typename Scalar, int C>
SpinorField<Scalar, C, Lattice1D> translated(const SpinorField<Scalar, C, Lattice1D>& field,
                                             Index shift) {
  const auto& lattice = field.lattice();
  SpinorField<Scalar, C, Lattice1D> out(lattice);
  for (Index x = 0; x < lattice.length(); ++x) {
    out.site(lattice.wrap(x + shift)) = field.site(x);
  }
  return out;
}

template <typename Scalar, int C>
SpinorField<Scalar, C, Lattice2D> translated(const SpinorField<Scalar, C, Lattice2D>& field,
                                             Index shift_x, Index shift_y) {
  const auto& lattice = field.lattice();
  SpinorField<Scalar, C, Lattice2D> out(lattice);
  for (Index y = 0; y < lattice.ly(); ++y) {
    for (Index x = 0; x < lattice.lx(); ++x) {
      out.site(lattice.index(x + shift_x, y + shift_y)) = field.site(lattice.index(x, y));
    }
  }
  return out;
}

/// Largest per-amplitude modulus of a - b.
template <typename Scalar, int C, typename L, Representation R>
Scalar max_abs_difference(const SpinorField<Scalar, C, L, R>& a,
                          const SpinorField<Scalar, C, L, R>& b) {
  if (!(a.lattice() == b.lattice())) {
    throw Error(ErrorKind::domain, "fields live on different lattices");
  }
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace qca

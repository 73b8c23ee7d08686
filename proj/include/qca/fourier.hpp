#pragma once

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

#include "qca/lattice.hpp"

namespace qca {

// Fourier convention used everywhere in the library:
//
//   psi(x)  = L^{-1/2} sum_k exp(+i k x) psihat(k)
//   psihat(k) = L^{-1/2} sum_x exp(-i k x) psi(x)
//
// with k = 2 pi j / L. Modes are stored in FFT order: storage slot i holds
// j = i for i < ceil(L/2) and j = i - L otherwise, so that j ranges over
// {-floor(L/2), ..., ceil(L/2) - 1}.

/// Signed mode number j for storage slot i.
inline Index mode_number(Index slot, Index length) noexcept {
  return slot < (length + 1) / 2 ? slot : slot - length;
}

/// Lattice momentum k = 2 pi j / L for storage slot i.
template <typename Scalar = double>
Scalar lattice_momentum(Index slot, Index length) noexcept {
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(mode_number(slot, length)) /
         Scalar(length);
}

template <typename Scalar, int C, typename L>
using MomentumField = SpinorField<Scalar, C, L, Representation::momentum>;

/// Unitary DFT along one axis, reusing Eigen::FFT plans across calls.
template <typename Scalar>
class UnitaryDft {
 public:
  using Complex = std::complex<Scalar>;

  UnitaryDft() { fft_.SetFlag(Eigen::FFT<Scalar>::Unscaled); }

  void forward(std::vector<Complex>& data) { transform(data, true); }
  void inverse(std::vector<Complex>& data) { transform(data, false); }

 private:
  void transform(std::vector<Complex>& data, bool forward) {
    out_.resize(data.size());
    if (forward) {
      fft_.fwd(out_, data);
    } else {
      fft_.inv(out_, data);
    }
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = out_[i] * scale;
  }

  Eigen::FFT<Scalar> fft_;
  std::vector<Complex> out_;
};

namespace detail {

template <typename Scalar, typename Storage>
void transform_rows_1d(Storage& values, bool forward, UnitaryDft<Scalar>& dft) {
  const Index n = values.cols();
  std::vector<std::complex<Scalar>> line(static_cast<std::size_t>(n));
  for (Index c = 0; c < values.rows(); ++c) {
    for (Index i = 0; i < n; ++i) line[i] = values(c, i);
    forward ? dft.forward(line) : dft.inverse(line);
    for (Index i = 0; i < n; ++i) values(c, i) = line[i];
  }
}

template <typename Scalar, typename Storage>
void transform_rows_2d(Storage& values, const Lattice2D& lattice, bool forward,
                       UnitaryDft<Scalar>& dft) {
  const Index lx = lattice.lx();
  const Index ly = lattice.ly();
  std::vector<std::complex<Scalar>> line;
  for (Index c = 0; c < values.rows(); ++c) {
    line.resize(static_cast<std::size_t>(lx));
    for (Index y = 0; y < ly; ++y) {
      for (Index x = 0; x < lx; ++x) line[x] = values(c, x + lx * y);
      forward ? dft.forward(line) : dft.inverse(line);
      for (Index x = 0; x < lx; ++x) values(c, x + lx * y) = line[x];
    }
    line.resize(static_cast<std::size_t>(ly));
    for (Index x = 0; x < lx; ++x) {
      for (Index y = 0; y < ly; ++y) line[y] = values(c, x + lx * y);
      forward ? dft.forward(line) : dft.inverse(line);
      for (Index y = 0; y < ly; ++y) values(c, x + lx * y) = line[y];
    }
  }
}

template <typename Scalar, typename Storage>
void transform(Storage& values, const Lattice1D&, bool forward, UnitaryDft<Scalar>& dft) {
  transform_rows_1d(values, forward, dft);
}

template <typename Scalar, typename Storage>
void transform(Storage& values, const Lattice2D& lattice, bool forward,
               UnitaryDft<Scalar>& dft) {
  transform_rows_2d(values, lattice, forward, dft);
}

}  // namespace detail

template <typename Scalar, int C, typename L>
MomentumField<Scalar, C, L> dft_forward(const SpinorField<Scalar, C, L>& field,
                                        UnitaryDft<Scalar>& dft) {
  auto values = field.values();
  detail::transform(values, field.lattice(), true, dft);
  return {field.lattice(), std::move(values)};
}

template <typename Scalar, int C, typename L>
SpinorField<Scalar, C, L> dft_inverse(const MomentumField<Scalar, C, L>& modes,
                                      UnitaryDft<Scalar>& dft) {
  auto values = modes.values();
  detail::transform(values, modes.lattice(), false, dft);
  return {modes.lattice(), std::move(values)};
}

template <typename Scalar, int C, typename L>
MomentumField<Scalar, C, L> dft_forward(const SpinorField<Scalar, C, L>& field) {
  UnitaryDft<Scalar> dft;
  return dft_forward(field, dft);
}

template <typename Scalar, int C, typename L>
SpinorField<Scalar, C, L> dft_inverse(const MomentumField<Scalar, C, L>& modes) {
  UnitaryDft<Scalar> dft;
  return dft_inverse(modes, dft);
}

}  // namespace qca

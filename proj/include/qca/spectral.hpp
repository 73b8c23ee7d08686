#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <vector>

#include "qca/fourier.hpp"

namespace qca {

/// Eigenphases arg(lambda) in (-pi, pi] of a unitary matrix, ascending.
template <typename Derived>
Eigen::Matrix<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Derived::RowsAtCompileTime, 1>
eigenphases(const Eigen::MatrixBase<Derived>& unitary) {
  using Matrix = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Eigen::ComplexEigenSolver<Matrix> solver(unitary.eval(), false);
  Eigen::Matrix<Real, Derived::RowsAtCompileTime, 1> phases(unitary.rows());
  for (Index i = 0; i < phases.size(); ++i) phases(i) = std::arg(solver.eigenvalues()(i));
  std::sort(phases.data(), phases.data() + phases.size());
  return phases;
}

/// max |(U^dagger U - I)_ij|
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real unitarity_defect(
    const Eigen::MatrixBase<Derived>& u) {
  using Matrix = typename Derived::PlainObject;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Projector onto the eigenspace of exp(-i s omega) for a unitary whose
/// spectrum is {exp(-i omega), exp(+i omega)}. When the two eigenvalues
/// coincide the whole space is one eigenspace and the identity is returned.
template <typename Derived>
typename Derived::PlainObject band_projector(
    const Eigen::MatrixBase<Derived>& u,
    typename Eigen::NumTraits<typename Derived::Scalar>::Real omega, int band) {
  using Matrix = typename Derived::PlainObject;
  using Complex = typename Derived::Scalar;
  const Complex own = std::polar(decltype(omega)(1), -band * omega);
  const Complex other = std::polar(decltype(omega)(1), band * omega);
  const Matrix identity = Matrix::Identity(u.rows(), u.cols());
  if (std::abs(own - other) < 1e-12) return identity;
  return (u - other * identity) / (own - other);
}

/// Exact multi-step evolution by per-mode diagonalization of the momentum
/// kernel. Each U(k) is Schur-factorized once (U = Q T Q^dagger, T diagonal
/// for a normal matrix); T steps then cost one phase rotation per mode,
/// independent of T.
template <typename Scalar, typename Lattice>
class SpectralPropagator {
 public:
  static constexpr int C = spinor_components<Lattice>::value;
  using Complex = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<Complex, C, C>;
  using Phases = Eigen::Matrix<Scalar, C, 1>;
  using Field = DiracField<Scalar, Lattice>;
  using Modes = MomentumField<Scalar, C, Lattice>;

  template <typename Kernel>
  SpectralPropagator(const Lattice& lattice, const Kernel& kernel) : lattice_(lattice) {
    bases_.reserve(static_cast<std::size_t>(lattice.sites()));
    phases_.reserve(static_cast<std::size_t>(lattice.sites()));
    Eigen::ComplexSchur<Matrix> schur;
    for (Index slot = 0; slot < lattice.sites(); ++slot) {
      schur.compute(evaluate(kernel, slot));
      bases_.push_back(schur.matrixU());
      Phases phases;
      for (int c = 0; c < C; ++c) phases(c) = std::arg(schur.matrixT()(c, c));
      phases_.push_back(phases);
    }
  }

  const Lattice& lattice() const noexcept { return lattice_; }

  Modes evolve_modes(const Modes& modes, Index steps) const {
    Modes out(lattice_);
    const Scalar t = Scalar(steps);
    for (Index slot = 0; slot < lattice_.sites(); ++slot) {
      const auto& q = bases_[static_cast<std::size_t>(slot)];
      const auto& theta = phases_[static_cast<std::size_t>(slot)];
      Eigen::Matrix<Complex, C, 1> coeffs = q.adjoint() * modes.site(slot);
      for (int c = 0; c < C; ++c) coeffs(c) *= std::polar(Scalar(1), theta(c) * t);
      out.site(slot) = q * coeffs;
    }
    return out;
  }

  Field evolve(const Field& field, Index steps) const {
    if (steps < 0) throw Error(ErrorKind::domain, "step count must be >= 0");
    if (steps == 0) return field;
    UnitaryDft<Scalar> dft;
    return dft_inverse(evolve_modes(dft_forward(field, dft), steps), dft);
  }

 private:
  template <typename Kernel>
  Matrix evaluate(const Kernel& kernel, Index slot) const {
    if constexpr (Lattice::dimension == 1) {
      return kernel(lattice_momentum<Scalar>(slot, lattice_.length()));
    } else {
      const Index ix = slot % lattice_.lx();
      const Index iy = slot / lattice_.lx();
      return kernel(lattice_momentum<Scalar>(ix, lattice_.lx()),
                    lattice_momentum<Scalar>(iy, lattice_.ly()));
    }
  }

  Lattice lattice_;
  std::vector<Matrix> bases_;
  std::vector<Phases> phases_;
};

}  // namespace qca

#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qca/dirac2d.hpp"
#include "qca/wavepacket.hpp"

using namespace qca;
using Complex = std::complex<double>;
using Spinor4 = SpinorField2D<>::Spinor;
constexpr double pi = std::numbers::pi;

namespace {
const Complex kChiValues[] = {Complex(1, 0), Complex(0, 1), std::polar(1.0, pi / 4)};
}

TEST_CASE("2D params validation") {
  CHECK_THROWS_AS(AutomatonParams2D<>(1.5), Error);
  CHECK_THROWS_AS(AutomatonParams2D<>(0.5, Complex(1.1, 0)), Error);
  const AutomatonParams2D<> p(0.5, std::polar(1.0, 0.3));
  CHECK(std::abs(std::abs(p.chi()) - 1) < 1e-15);
}

TEST_CASE("shift symbols are normalized") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> mom(-pi, pi);
  for (int i = 0; i < 200; ++i) {
    const auto [sp, sm] = shift_symbols(mom(rng), mom(rng));
    CHECK(std::abs(std::norm(sp) + std::norm(sm) - 1) < 1e-15);
  }
}

TEST_CASE("2D kernel special cases") {
  SUBCASE("m = 0 at k = 0: A is the identity") {
    const auto u = build_kernel_2d(AutomatonParams2D<>(0.0))(0.0, 0.0);
    CHECK((u - Matrix4c<double>::Identity()).cwiseAbs().maxCoeff() < 1e-16);
  }
  SUBCASE("k = 0 eigenphases are +-arccos(n)") {
    const AutomatonParams2D<> p(0.6);
    const auto phases = eigenphases(build_kernel_2d(p)(0.0, 0.0));
    const double w = std::acos(0.8);
    CHECK(std::abs(phases(0) + w) < 1e-12);
    CHECK(std::abs(phases(1) + w) < 1e-12);
    CHECK(std::abs(phases(2) - w) < 1e-12);
    CHECK(std::abs(phases(3) - w) < 1e-12);
  }
  SUBCASE("m = 1 is the pure chirality swap") {
    Matrix4c<double> expected = Matrix4c<double>::Zero();
    expected.topRightCorner<2, 2>() = Complex(0, 1) * Eigen::Matrix2cd::Identity();
    expected.bottomLeftCorner<2, 2>() = Complex(0, 1) * Eigen::Matrix2cd::Identity();
    for (double kx : {-1.0, 0.5, 3.0}) {
      const auto u = build_kernel_2d(AutomatonParams2D<>(1.0, Complex(0, 1)))(kx, 0.7);
      CHECK((u - expected).cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("random samples are unitary") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0, 1), mom(-pi, pi);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const AutomatonParams2D<> p(unit(rng), std::polar(1.0, 2 * pi * unit(rng)));
      worst = std::max(worst, unitarity_defect(build_kernel_2d(p)(mom(rng), mom(rng))));
    }
    CHECK(worst < 1e-13);
  }
}

TEST_CASE("unitarity on a 64x64 Brillouin grid") {
  for (double m : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (Complex chi : kChiValues) {
      const auto kernel = build_kernel_2d(AutomatonParams2D<>(m, chi));
      double worst = 0;
      for (Index iy = 0; iy < 64; ++iy)
        for (Index ix = 0; ix < 64; ++ix)
          worst = std::max(worst, unitarity_defect(kernel(lattice_momentum(ix, 64), lattice_momentum(iy, 64))));
      CHECK(worst < 1e-13);
    }
  }
}

TEST_CASE("step_2d equals the dense shift-operator matrix") {
  const Index lx = 5, ly = 4;
  const Lattice2D lattice(lx, ly);
  for (double m : {0.0, 0.5, 1.0}) {
    for (Complex chi : kChiValues) {
      const auto field = oracle::random_field<4>(lattice, 21);
      const Eigen::VectorXcd expected = oracle::dense_step_2d(lx, ly, m, chi) * oracle::stack(field);
      const auto out = step_2d(field, AutomatonParams2D<>(m, chi));
      CHECK((oracle::stack(out) - expected).cwiseAbs().maxCoeff() < 1e-15);
    }
  }
}

TEST_CASE("dense 2D step matrix is unitary") {
  const auto u = oracle::dense_step_2d(4, 3, 0.35, std::polar(1.0, 0.9));
  CHECK(unitarity_defect(u) < 1e-14);
}

TEST_CASE("axis convention: massless delta of component 0 moves to (x-1, y) and (x, y+1)") {
  const Lattice2D lattice(8, 8);
  const auto out = step_2d(delta_state<double>(lattice, 4, 4, Spinor4::Unit(0)), AutomatonParams2D<>(0.0));
  // Component 0 picks up S+ (weight 1/2 each), component 1 picks up -chi S- .
  CHECK(std::abs(out.values()(0, lattice.index(3, 4)) - 0.5) < 1e-16);
  CHECK(std::abs(out.values()(0, lattice.index(4, 5)) - 0.5) < 1e-16);
  CHECK(std::abs(out.values()(1, lattice.index(3, 4)) + 0.5) < 1e-16);
  CHECK(std::abs(out.values()(1, lattice.index(4, 5)) - 0.5) < 1e-16);
  CHECK(norm(out) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("vacuum and m = 1 stationarity") {
  const Lattice2D lattice(10, 12);
  const auto vac = vacuum(lattice);
  CHECK(step_2d(vac, AutomatonParams2D<>(0.4)) == vac);

  auto field = oracle::random_field<4>(lattice, 4);
  const auto map0 = probability_map(field);
  const AutomatonParams2D<> heavy(1.0);
  const auto once = step_2d(field, heavy);
  CHECK((once.values().topRows<2>() - Complex(0, 1) * field.values().bottomRows<2>()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((once.values().bottomRows<2>() - Complex(0, 1) * field.values().topRows<2>()).cwiseAbs().maxCoeff() == 0.0);
  for (int t = 0; t < 20; ++t) {
    field = step_2d(field, heavy);
    CHECK((probability_map(field) - map0).abs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("2D spectral stepping agrees with stencil steps") {
  const Lattice2D lattice(16, 12);
  const auto field = oracle::random_field<4>(lattice, 5);
  const AutomatonParams2D<> p(0.5);
  CHECK(step_2d_spectral(field, p, 0) == field);
  const auto delta = delta_state<double>(lattice, 3, 7, Spinor4(0.5, 0.5, Complex(0, 0.5), -0.5));
  CHECK(max_abs_difference(step_2d_spectral(delta, p, 1), step_2d(delta, p)) < 1e-12);

  auto stencil = field;
  for (int t = 0; t < 3; ++t) stencil = step_2d(stencil, p);
  CHECK(max_abs_difference(step_2d_spectral(field, p, 3), stencil) < 1e-11);

  for (Complex chi : kChiValues) {
    const AutomatonParams2D<> params(0.3, chi);
    const auto propagator = make_propagator_2d(lattice, params);
    auto s = field;
    for (int t = 0; t < 7; ++t) s = step_2d(s, params);
    CHECK(max_abs_difference(propagator.evolve(field, 7), s) < 1e-10);
  }
}

TEST_CASE("2D Gaussian spectral evolution conserves norm") {
  const Lattice2D lattice(64, 64);
  WavepacketSpec2D<> spec;
  spec.center = {32, 32};
  spec.width = {2, 2};
  spec.momentum = {0.4, -0.2};
  spec.polarization = Spinor4(0.5, 0.5, 0.5, 0.5);
  const auto out = step_2d_spectral(gaussian_packet(lattice, spec), AutomatonParams2D<>(0.2), 45);
  CHECK(std::abs(norm(out) - 1) < 1e-10);
}

TEST_CASE("2D causal cone is the square |dx|, |dy| <= T") {
  const Lattice2D lattice(40, 40);
  const Index x0 = 20, y0 = 20, steps = 12;
  const AutomatonParams2D<> params(0.3, Complex(0, 1));
  auto field = delta_state<double>(lattice, x0, y0, Spinor4::Unit(0));
  for (Index t = 0; t < steps; ++t) field = step_2d(field, params);
  double inside = 0;
  for (Index y = 0; y < 40; ++y) {
    for (Index x = 0; x < 40; ++x) {
      const bool in_cone = std::abs(x - x0) <= steps && std::abs(y - y0) <= steps;
      const double weight = field.site(lattice.index(x, y)).squaredNorm();
      if (!in_cone) CHECK(weight == 0.0);
      else inside += weight;
    }
  }
  CHECK(inside == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("dispersion_2d values") {
  for (double m : {0.0, 0.3, 0.9}) CHECK(dispersion_2d(pi, 0.0, AutomatonParams2D<>(m)) == doctest::Approx(0.0));
  CHECK(dispersion_2d(0.0, 0.0, AutomatonParams2D<>(0.0)) == doctest::Approx(pi / 2).epsilon(1e-15));
  const AutomatonParams2D<> p(0.6);
  CHECK(dispersion_2d(pi / 3, pi / 3, p) == doctest::Approx(0.41151684606748802).epsilon(1e-14));

  // Eigenphases of the kernel sit at pi/2 - dispersion_2d.
  const auto phases = eigenphases(build_kernel_2d(p)(pi / 3, pi / 3));
  CHECK(std::abs(phases(3) - (pi / 2 - dispersion_2d(pi / 3, pi / 3, p))) < 1e-12);
  CHECK(std::abs(phases(0) + (pi / 2 - dispersion_2d(pi / 3, pi / 3, p))) < 1e-12);
}

TEST_CASE("dispersion_2d symmetries") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mom(-pi, pi), unit(0, 1);
  for (int i = 0; i < 500; ++i) {
    const AutomatonParams2D<> p(unit(rng));
    const double kx = mom(rng), ky = mom(rng);
    const double w = dispersion_2d(kx, ky, p);
    CHECK(dispersion_2d(ky, kx, p) == w);
    CHECK(std::abs(dispersion_2d(-kx, -ky, p) - w) < 1e-15);
  }
}

TEST_CASE("group_velocity_2d") {
  for (double m : {0.0, 0.4, 0.8, 1.0}) {
    const AutomatonParams2D<> p(m);
    for (auto [kx, ky] : {std::pair{pi, 0.0}, {-pi, 0.0}, {0.0, pi}, {0.0, -pi}}) {
      const auto v = group_velocity_2d(kx, ky, p);
      CHECK(std::abs(v.vx) < 1e-15);
      CHECK(std::abs(v.vy) < 1e-15);
    }
  }
  for (double kx : {-2.0, 0.3, 1.7}) CHECK(group_velocity_2d(kx, 0.9, AutomatonParams2D<>(1.0)).speed() == 0.0);

  SUBCASE("massless low-momentum limit is isotropic at 1/sqrt(2)") {
    const AutomatonParams2D<> p(0.0);
    const auto eigen = [&](double kx, double ky) { return eigenphase_2d(kx, ky, p); };
    for (double phi : {0.0, 0.4, pi / 4, 1.2, 2.5, 4.0}) {
      const double r = 1e-3;
      const double kx = r * std::cos(phi), ky = r * std::sin(phi);
      const double fx = oracle::first_difference([&](double k) { return eigen(k, ky); }, kx, 1e-7);
      const double fy = oracle::first_difference([&](double k) { return eigen(kx, k); }, ky, 1e-7);
      CHECK(std::hypot(fx, fy) == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-5));
      CHECK(group_velocity_2d(kx, ky, p).speed() == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-6));
    }
  }

  SUBCASE("analytic gradient matches finite differences of the dispersion") {
    for (double m : {0.0, 0.25, 0.5, 0.75}) {
      const AutomatonParams2D<> p(m);
      for (Index iy = 0; iy < 64; ++iy) {
        for (Index ix = 0; ix < 64; ++ix) {
          const double kx = lattice_momentum(ix, 64), ky = lattice_momentum(iy, 64);
          const double u = p.n() * (std::cos(kx) + std::cos(ky)) / 2;
          if (std::abs(u) > 1 - 1e-6) continue;
          const auto v = group_velocity_2d(kx, ky, p);
          // v is the gradient of the eigenphase, i.e. minus the gradient of arcsin.
          const double fx = oracle::first_difference([&](double k) { return dispersion_2d(k, ky, p); }, kx);
          const double fy = oracle::first_difference([&](double k) { return dispersion_2d(kx, k, p); }, ky);
          CHECK(std::abs(v.vx + fx) < 1e-6);
          CHECK(std::abs(v.vy + fy) < 1e-6);
          CHECK(v.speed() <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("group velocity field and anisotropy") {
  const auto field = group_velocity_field(AutomatonParams2D<>(0.0), 128);
  CHECK(field.speed.maxCoeff() <= 1.0);
  CHECK(field.k.front() == doctest::Approx(-pi));
  CHECK(field.k[64] == 0.0);
  CHECK(field.speed(64, 0) < 1e-15);  // (kx, ky) = (-pi, 0)
  CHECK(field.speed(0, 64) < 1e-15);  // (0, -pi)
  CHECK(anisotropy_ratio(AutomatonParams2D<>(0.0), 3.0) > 1.1);
  CHECK(anisotropy_ratio(AutomatonParams2D<>(0.0), 0.1) < 1.01);
  CHECK((group_velocity_field(AutomatonParams2D<>(1.0), 32).speed == 0.0).all());
  CHECK_THROWS_AS(group_velocity_field(AutomatonParams2D<>(0.0), 8), Error);
}

TEST_CASE("symmetry: reflection (x, y) -> (-y, -x) with component signs (+, -, +, -)") {
  // Conjugating U by this reflection maps S+ -> S+, S- -> -S-; with the sign
  // flip on components 1 and 3 the step commutes with the map.
  const Index size = 24;
  const Lattice2D lattice(size, size);
  const Index c = 12;
  auto field = delta_state<double>(lattice, c, c, Spinor4::Unit(0));
  const AutomatonParams2D<> p(0.3, std::polar(1.0, 0.7));
  for (int t = 0; t < 10; ++t) field = step_2d(field, p);
  const auto map = probability_map(field);
  for (Index y = 0; y < size; ++y) {
    for (Index x = 0; x < size; ++x) {
      const Index rx = c - (y - c), ry = c - (x - c);
      CHECK(std::abs(map(lattice.index(x, y)) - map(lattice.index(rx, ry))) < 1e-15);
    }
  }
}

TEST_CASE("band spinors span the exp(-i s omega) eigenspace") {
  for (double m : {0.0, 0.1, 0.6}) {
    const AutomatonParams2D<> p(m, std::polar(1.0, 0.4));
    for (auto [kx, ky] : {std::pair{pi / 4, 0.0}, {1.0, -2.0}, {pi, 0.0}}) {
      for (int s : {1, -1}) {
        const auto chi = band_spinor_2d(kx, ky, p, s);
        const auto lambda = std::polar(1.0, -s * eigenphase_2d(kx, ky, p));
        CHECK((build_kernel_2d(p)(kx, ky) * chi - lambda * chi).cwiseAbs().maxCoeff() < 1e-13);
      }
    }
  }
}

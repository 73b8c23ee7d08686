#include "qca/scenario/run.hpp"

#include <chrono>
#include <cmath>

#include "qca/dirac1d.hpp"
#include "qca/dirac2d.hpp"
#include "qca/wavepacket.hpp"

namespace qca::scenario {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <int Dim>
struct Automaton;

template <>
struct Automaton<1> {
  using Lattice = Lattice1D;
  using Field = SpinorField1D<double>;
  using Params = AutomatonParams1D<double>;

  static Lattice lattice(const ScenarioConfig& c) { return Lattice1D(c.lattice[0]); }
  static Params params(const ScenarioConfig& c) { return Params(c.mass); }
  static Field step(const Field& f, const Params& p) { return step_1d(f, p); }
  static auto propagator(const Lattice& l, const Params& p) { return make_propagator_1d(l, p); }
  static Field::Spinor band_spinor(const InitialState& s, const Params& p) {
    return band_spinor_1d(s.momentum[0], p, s.band);
  }
  static Field delta(const Lattice& l, const InitialState& s, const Field::Spinor& spinor) {
    return delta_state<double>(l, s.site[0], spinor);
  }
  static Eigen::ArrayXd up(const Field& f) { return f.values().row(0).cwiseAbs2().transpose(); }
  static Eigen::ArrayXd down(const Field& f) { return f.values().row(1).cwiseAbs2().transpose(); }
};

template <>
struct Automaton<2> {
  using Lattice = Lattice2D;
  using Field = SpinorField2D<double>;
  using Params = AutomatonParams2D<double>;

  static Lattice lattice(const ScenarioConfig& c) { return Lattice2D(c.lattice[0], c.lattice[1]); }
  static Params params(const ScenarioConfig& c) { return Params(c.mass, c.chi); }
  static Field step(const Field& f, const Params& p) { return step_2d(f, p); }
  static auto propagator(const Lattice& l, const Params& p) { return make_propagator_2d(l, p); }
  static Field::Spinor band_spinor(const InitialState& s, const Params& p) {
    return band_spinor_2d(s.momentum[0], s.momentum[1], p, s.band);
  }
  static Field delta(const Lattice& l, const InitialState& s, const Field::Spinor& spinor) {
    return delta_state<double>(l, s.site[0], s.site[1], spinor);
  }
  static Eigen::ArrayXd up(const Field& f) { return spin_probability_map(f, true); }
  static Eigen::ArrayXd down(const Field& f) { return spin_probability_map(f, false); }
};

template <int Dim>
typename Automaton<Dim>::Field initial_field(const ScenarioConfig& c,
                                             const typename Automaton<Dim>::Lattice& lattice,
                                             const typename Automaton<Dim>::Params& params) {
  using A = Automaton<Dim>;
  using Spinor = typename A::Field::Spinor;
  const auto& s = c.initial;
  switch (s.kind) {
    case StateKind::vacuum:
      return vacuum<double>(lattice);
    case StateKind::delta: {
      Spinor spinor;
      for (int i = 0; i < 2 * Dim; ++i) spinor(i) = s.spinor[i];
      return A::delta(lattice, s, spinor);
    }
    case StateKind::gaussian: {
      WavepacketSpec<double, Dim> spec;
      for (int a = 0; a < Dim; ++a) {
        spec.center[a] = s.center[a];
        spec.width[a] = s.width[a];
        spec.momentum[a] = s.momentum[a];
      }
      spec.band = s.band;
      if (s.polarization) {
        for (int i = 0; i < 2 * Dim; ++i) spec.polarization(i) = (*s.polarization)[i];
        spec.polarization.normalize();
      } else {
        spec.polarization = A::band_spinor(s, params);
      }
      return gaussian_packet(lattice, spec);
    }
  }
  throw Error(ErrorKind::config, "unknown initial state kind");
}

template <int Dim>
RunRecord run_impl(const ScenarioConfig& c) {
  using A = Automaton<Dim>;
  RunRecord record;
  record.config = c;
  auto& timings = record.timings_ms;

  auto start = Clock::now();
  const auto lattice = A::lattice(c);
  const auto params = A::params(c);
  const auto initial = initial_field<Dim>(c, lattice, params);
  timings["prepare"] = elapsed_ms(start);

  const std::vector<Index> shape(c.lattice.begin(), c.lattice.end());
  const bool per_step = c.observables.norm_trace || c.observables.peak_trajectory.has_value();
  const auto peak_mode = c.observables.peak_trajectory.value_or(PeakObservable::total);

  auto observe = [&](Index t, const typename A::Field& field) {
    if (c.observables.norm_trace) record.norms.push_back(norm(field));
    if (c.observables.peak_trajectory) {
      const Eigen::ArrayXd map =
          peak_mode == PeakObservable::total ? Eigen::ArrayXd(probability_map(field)) : A::up(field);
      auto sample = argmax_site(map, shape);
      sample.step = t;
      record.peak_trajectory.push_back(sample);
    }
  };

  typename A::Field final_field = initial;
  start = Clock::now();
  if (c.engine == Engine::spectral) {
    const auto propagator = A::propagator(lattice, params);
    timings["spectral_setup"] = elapsed_ms(start);
    start = Clock::now();
    if (per_step) {
      for (Index t = 0; t <= c.steps; ++t) {
        final_field = t == 0 ? initial : propagator.evolve(initial, t);
        observe(t, final_field);
      }
    } else {
      final_field = propagator.evolve(initial, c.steps);
    }
    timings["evolve_spectral"] = elapsed_ms(start);
  } else {
    if (per_step) observe(0, final_field);
    for (Index t = 1; t <= c.steps; ++t) {
      final_field = A::step(final_field, params);
      if (per_step) observe(t, final_field);
    }
    timings["evolve_stencil"] = elapsed_ms(start);

    if (c.engine == Engine::both) {
      start = Clock::now();
      const auto spectral = A::propagator(lattice, params).evolve(initial, c.steps);
      timings["evolve_spectral"] = elapsed_ms(start);
      const double difference = max_abs_difference(final_field, spectral);
      record.engine_difference = difference;
      if (!(difference < 1e-10)) {
        throw Error(ErrorKind::engine_mismatch,
                    "stencil and spectral engines differ by " + std::to_string(difference) +
                        " after " + std::to_string(c.steps) + " steps (tolerance 1e-10)");
      }
    }
  }

  if (c.observables.probability_maps) {
    record.final_maps.shape = shape;
    record.final_maps.total = probability_map(final_field);
    record.final_maps.up = A::up(final_field);
    record.final_maps.down = A::down(final_field);
  }

  if constexpr (Dim == 2) {
    if (c.observables.group_velocity_resolution) {
      start = Clock::now();
      record.group_velocity = group_velocity_field(params, *c.observables.group_velocity_resolution);
      timings["group_velocity"] = elapsed_ms(start);
    }
  }
  return record;
}

}  // namespace

PeakSample argmax_site(const Eigen::ArrayXd& map, const std::vector<Index>& shape) {
  const Index lx = shape.at(0);
  PeakSample best;
  bool found = false;
  // Visit sites in (x, y) lexicographic order; only a strictly larger value
  // replaces the current best.
  const Index ly = shape.size() > 1 ? shape[1] : 1;
  for (Index x = 0; x < lx; ++x) {
    for (Index y = 0; y < ly; ++y) {
      const double value = map(x + lx * y);
      if (!found || value > best.value) {
        best.site = {x, y};
        best.value = value;
        found = true;
      }
    }
  }
  return best;
}

std::vector<PeakSample> track_packet_peak(const std::vector<Eigen::ArrayXd>& maps,
                                          const std::vector<Index>& shape) {
  std::vector<PeakSample> out;
  out.reserve(maps.size());
  for (std::size_t t = 0; t < maps.size(); ++t) {
    auto sample = argmax_site(maps[t], shape);
    sample.step = static_cast<Index>(t);
    out.push_back(sample);
  }
  return out;
}

std::vector<double> fit_peak_velocity(const std::vector<PeakSample>& trajectory,
                                      const std::vector<Index>& shape) {
  std::vector<double> slopes(shape.size(), 0.0);
  if (trajectory.size() < 2) return slopes;
  for (std::size_t a = 0; a < shape.size(); ++a) {
    const auto length = static_cast<double>(shape[a]);
    std::vector<double> unwrapped{double(trajectory[0].site[a])};
    for (std::size_t i = 1; i < trajectory.size(); ++i) {
      double jump = double(trajectory[i].site[a]) - double(trajectory[i - 1].site[a]);
      jump -= length * std::round(jump / length);
      unwrapped.push_back(unwrapped.back() + jump);
    }
    double st = 0, sx = 0, stt = 0, stx = 0;
    const double n = double(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
      const double t = double(trajectory[i].step);
      st += t;
      sx += unwrapped[i];
      stt += t * t;
      stx += t * unwrapped[i];
    }
    slopes[a] = (n * stx - st * sx) / (n * stt - st * st);
  }
  return slopes;
}

RunRecord run(const ScenarioConfig& config) {
  validate(config);
  return config.dimension == 1 ? run_impl<1>(config) : run_impl<2>(config);
}

}  // namespace qca::scenario

#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "qca/error.hpp"

namespace qca {

/// Exponents (length, time, mass) of a quantity written as a monomial
/// l_P^a t_P^b m_P^c.
struct UnitMonomial {
  int length = 0;
  int time = 0;
  int mass = 0;
  friend constexpr bool operator==(const UnitMonomial&, const UnitMonomial&) = default;
};

inline constexpr UnitMonomial kSpeedOfLightMonomial{1, -1, 0};
inline constexpr UnitMonomial kReducedPlanckMonomial{2, -1, 1};   // m_P c^2 t_P
inline constexpr UnitMonomial kGravitationalMonomial{3, -2, -1};  // l_P c^2 / m_P

/// The three irreducible constants of the automaton, in SI units. Everything
/// else is derived on demand.
template <typename Scalar = double>
class PlanckUnits {
 public:
  PlanckUnits(Scalar length_m, Scalar time_s, Scalar mass_kg)
      : length_(length_m), time_(time_s), mass_(mass_kg) {
    if (!(length_m > 0 && time_s > 0 && mass_kg > 0)) {
      throw Error(ErrorKind::domain, "Planck units must be positive");
    }
  }

  Scalar length() const noexcept { return length_; }
  Scalar time() const noexcept { return time_; }
  Scalar mass() const noexcept { return mass_; }

  Scalar speed_of_light() const noexcept { return length_ / time_; }
  Scalar reduced_planck() const noexcept {
    const Scalar c = speed_of_light();
    return mass_ * c * c * time_;
  }
  Scalar gravitational() const noexcept {
    const Scalar c = speed_of_light();
    return length_ * c * c / mass_;
  }

  /// l_P^a t_P^b m_P^c
  Scalar evaluate(const UnitMonomial& m) const {
    return ipow(length_, m.length) * ipow(time_, m.time) * ipow(mass_, m.mass);
  }

 private:
  static Scalar ipow(Scalar base, int exponent) {
    Scalar out = 1;
    const bool invert = exponent < 0;
    for (int i = 0; i < (invert ? -exponent : exponent); ++i) out *= base;
    return invert ? 1 / out : out;
  }

  Scalar length_;
  Scalar time_;
  Scalar mass_;
};

/// CODATA 2018 Planck length, time and mass.
template <typename Scalar = double>
PlanckUnits<Scalar> codata2018() {
  return {Scalar(1.616255e-35), Scalar(5.391247e-44), Scalar(2.176434e-8)};
}

/// Natural profile: l_P = t_P = m_P = 1.
template <typename Scalar = double>
PlanckUnits<Scalar> natural_units() {
  return {Scalar(1), Scalar(1), Scalar(1)};
}

template <typename Scalar = double>
std::optional<PlanckUnits<Scalar>> units_profile(std::string_view name) {
  if (name == "codata2018") return codata2018<Scalar>();
  if (name == "natural") return natural_units<Scalar>();
  return std::nullopt;
}

template <typename Scalar = double>
struct DerivedConstants {
  Scalar c;
  Scalar hbar;
  Scalar G;
};

template <typename Scalar>
DerivedConstants<Scalar> derive_constants(Scalar length_m, Scalar time_s, Scalar mass_kg) {
  const PlanckUnits<Scalar> units(length_m, time_s, mass_kg);
  return {units.speed_of_light(), units.reduced_planck(), units.gravitational()};
}

/// Largest energy per particle, hbar pi / t_P.
template <typename Scalar>
Scalar max_energy(const PlanckUnits<Scalar>& units) {
  return units.reduced_planck() * std::numbers::pi_v<Scalar> / units.time();
}

/// Largest momentum, hbar pi / l_P.
template <typename Scalar>
Scalar max_momentum(const PlanckUnits<Scalar>& units) {
  return units.reduced_planck() * std::numbers::pi_v<Scalar> / units.length();
}

template <typename Scalar>
Scalar mass_to_kg(Scalar mass, const PlanckUnits<Scalar>& units) {
  if (!(mass >= 0 && mass <= 1)) {
    throw Error(ErrorKind::domain, "adimensional mass must lie in [0, 1]");
  }
  return mass * units.mass();
}

template <typename Scalar>
Scalar kg_to_adimensional(Scalar kg, const PlanckUnits<Scalar>& units) {
  if (!(kg >= 0)) throw Error(ErrorKind::domain, "mass in kg must be nonnegative");
  if (kg > units.mass()) {
    throw Error(ErrorKind::out_of_range, "mass exceeds the Planck mass " +
                                             std::to_string(units.mass()) + " kg");
  }
  return kg / units.mass();
}

}  // namespace qca

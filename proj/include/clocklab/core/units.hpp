#pragma once

#include <numbers>
#include <string>
#include <string_view>

#include "clocklab/core/error.hpp"

namespace clocklab {

enum class UnitSystem { si, natural };

// CODATA exact values.
inline constexpr double kPlanckSI = 6.62607015e-34;      // J s
inline constexpr double kSpeedOfLightSI = 299792458.0;   // m/s
inline constexpr double kStandardGravitySI = 9.80665;    // m/s^2

/// Physical constants of the active unit system.
///
/// The natural system sets hbar = c = 1 and keeps the second as the unit of
/// time, so lengths are light-seconds and energies are hbar per second.
struct UnitContext {
  double hbar = 1.0;
  double h = 2.0 * std::numbers::pi;
  double c = 1.0;
  double g = kStandardGravitySI / kSpeedOfLightSI;
  UnitSystem system = UnitSystem::natural;

  static UnitContext si(double g = kStandardGravitySI) {
    return {kPlanckSI / (2.0 * std::numbers::pi), kPlanckSI, kSpeedOfLightSI, g,
            UnitSystem::si};
  }

  static UnitContext natural(double g = kStandardGravitySI / kSpeedOfLightSI) {
    return {1.0, 2.0 * std::numbers::pi, 1.0, g, UnitSystem::natural};
  }
};

enum class Dimension {
  dimensionless,
  mass,
  time,
  energy,
  length,
  momentum,
  velocity,
  acceleration,
};

inline Dimension parse_dimension(std::string_view tag) {
  if (tag == "dimensionless" || tag == "1") return Dimension::dimensionless;
  if (tag == "mass") return Dimension::mass;
  if (tag == "time") return Dimension::time;
  if (tag == "energy") return Dimension::energy;
  if (tag == "length") return Dimension::length;
  if (tag == "momentum") return Dimension::momentum;
  if (tag == "velocity" || tag == "speed") return Dimension::velocity;
  if (tag == "acceleration") return Dimension::acceleration;
  throw Error(Errc::unknown_dimension, std::string(tag));
}

constexpr std::string_view to_string(Dimension d) {
  switch (d) {
    case Dimension::dimensionless: return "dimensionless";
    case Dimension::mass: return "mass";
    case Dimension::time: return "time";
    case Dimension::energy: return "energy";
    case Dimension::length: return "length";
    case Dimension::momentum: return "momentum";
    case Dimension::velocity: return "velocity";
    case Dimension::acceleration: return "acceleration";
  }
  return "unknown";
}

struct Quantity {
  double value = 0.0;
  Dimension dim = Dimension::dimensionless;
};

namespace detail {

// Multiplier taking an SI value to natural units (hbar = c = 1, time in s).
inline double si_to_natural_scale(Dimension d, double hbar, double c) {
  switch (d) {
    case Dimension::dimensionless: return 1.0;
    case Dimension::mass: return c * c / hbar;
    case Dimension::time: return 1.0;
    case Dimension::energy: return 1.0 / hbar;
    case Dimension::length: return 1.0 / c;
    case Dimension::momentum: return c / hbar;
    case Dimension::velocity: return 1.0 / c;
    case Dimension::acceleration: return 1.0 / c;
  }
  throw Error(Errc::unknown_dimension, "unhandled dimension");
}

}  // namespace detail

inline Quantity convert_units(Quantity q, const UnitContext& from, const UnitContext& to) {
  if (from.system == to.system) return q;
  if (from.system == UnitSystem::si) {
    return {q.value * detail::si_to_natural_scale(q.dim, from.hbar, from.c), q.dim};
  }
  return {q.value / detail::si_to_natural_scale(q.dim, to.hbar, to.c), q.dim};
}

inline double rest_energy(double mass, const UnitContext& units) {
  return mass * units.c * units.c;
}

}  // namespace clocklab

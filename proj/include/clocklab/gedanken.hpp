#pragma once

// Uncertainty bookkeeping for the two clock-weighing thought experiments:
// a clock hung from a spring in a gravitational field, and a charged clock
// accelerated by a uniform electric field. Both close on c^2 dm dtau = h.

#include <cmath>
#include <optional>
#include <string>

#include "clocklab/core/error.hpp"
#include "clocklab/core/units.hpp"

namespace clocklab::gedanken {

struct BoxExperiment {
  double delta_q = 0.0;  // scale-reading accuracy
  double t = 0.0;        // reading interval on an external clock
  double g = 0.0;        // local gravitational acceleration
  std::optional<double> spring_k;
  std::optional<double> spring_l;
};

struct EFieldExperiment {
  double delta_q = 0.0;
  double t = 0.0;
  double e_field = 0.0;
  double charge = 0.0;
  double v = 0.0;  // measured average velocity
};

struct UncertaintyReport {
  double delta_p = 0.0;
  double delta_m = 0.0;
  double delta_tau = 0.0;
  double product_ratio = 0.0;            // c^2 dm dtau / h
  double product_ratio_hbar_half = 0.0;  // c^2 dm dtau / (hbar/2)
};

/// Mass balancing a spring of stiffness k stretched by l: k l = m g.
inline double spring_mass(double k, double l, double g) {
  if (!(g > 0.0)) throw Error(Errc::invalid_gravity, "g must be positive");
  if (!(k > 0.0)) throw Error(Errc::invalid_argument, "spring constant must be positive");
  if (l < 0.0) throw Error(Errc::invalid_argument, "spring extension must be nonnegative");
  return k * l / g;
}

inline double dilation_factor(double v, const UnitContext& units) {
  if (v < 0.0) throw Error(Errc::invalid_argument, "speed must be nonnegative");
  if (v >= units.c) throw Error(Errc::superluminal, "v >= c");
  const double beta = v / units.c;
  return std::sqrt(1.0 - beta * beta);
}

namespace detail {

inline UncertaintyReport finish(double delta_p, double delta_m, double delta_tau,
                                const UnitContext& units) {
  const double c2 = units.c * units.c;
  return {delta_p, delta_m, delta_tau, c2 * delta_m * delta_tau / units.h,
          c2 * delta_m * delta_tau / (0.5 * units.hbar)};
}

}  // namespace detail

inline UncertaintyReport box_uncertainties(const BoxExperiment& exp, const UnitContext& units) {
  if (!(exp.delta_q > 0.0)) throw Error(Errc::invalid_argument, "delta_q must be positive");
  if (!(exp.t > 0.0)) throw Error(Errc::invalid_argument, "t must be positive");
  if (!(exp.g > 0.0)) throw Error(Errc::invalid_gravity, "g must be positive");
  const double delta_p = units.h / exp.delta_q;
  // The reading interval bounds the resolvable force to delta_p / t = g delta_m.
  const double delta_m = delta_p / (exp.g * exp.t);
  // Red shift of a clock displaced by delta_q along the field.
  const double delta_tau = exp.g * exp.delta_q * exp.t / (units.c * units.c);
  return detail::finish(delta_p, delta_m, delta_tau, units);
}

inline UncertaintyReport efield_uncertainties(const EFieldExperiment& exp,
                                              const UnitContext& units) {
  if (!(exp.delta_q > 0.0)) throw Error(Errc::invalid_argument, "delta_q must be positive");
  if (!(exp.t > 0.0)) throw Error(Errc::invalid_argument, "t must be positive");
  if (exp.v == 0.0) throw Error(Errc::at_rest, "v = 0");
  if (exp.v < 0.0) throw Error(Errc::invalid_argument, "v must be positive");
  if (exp.v >= units.c) throw Error(Errc::superluminal, "v >= c");
  const double delta_p = units.h / exp.delta_q;
  const double delta_m = delta_p / exp.v;
  // t dv ~ dq, and d sqrt(1 - v^2/c^2) ~ (v/c^2) dv to first order.
  const double delta_tau = exp.v * exp.delta_q / (units.c * units.c);
  return detail::finish(delta_p, delta_m, delta_tau, units);
}

/// Mass inferred from the electric-field experiment: e E = m v / t.
inline double efield_mass(const EFieldExperiment& exp) {
  if (exp.v == 0.0) throw Error(Errc::at_rest, "v = 0");
  return exp.charge * exp.e_field * exp.t / exp.v;
}

}  // namespace clocklab::gedanken

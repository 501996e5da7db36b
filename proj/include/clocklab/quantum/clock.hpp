#pragma once

#include <cmath>

#include "clocklab/quantum/operators.hpp"

namespace clocklab::quantum {

struct TauMoments {
  double t = 0.0;
  double mean_tau = 0.0;
  double var_tau = 0.0;
};

/// Proper-time mean and variance after evolving the state for coordinate time t.
inline TauMoments tau_moments_simulated(const MomentumSpaceState& s, double t,
                                        HealthPolicy policy = HealthPolicy::strict) {
  const auto m = compute_moments(evolve(s, t), policy);
  return {t, m.mean_tau, m.var_tau()};
}

/// Coefficients of the exact quadratic Var tau(t) = quad t^2 + lin t + const
/// implied by tau(t) = D t + tau with D = E / sqrt(E^2 + c^2 p^2).
struct VarianceLawCoefficients {
  double quad = 0.0;   // <D^2> - <D>^2
  double lin = 0.0;    // <[D, tau]_+> - 2 <D><tau>
  double const_ = 0.0; // <tau^2> - <tau>^2

  double predict(double t) const { return (quad * t + lin) * t + const_; }
};

inline VarianceLawCoefficients variance_law_from(const StateMoments& m) {
  return {m.mean_d2 - m.mean_d * m.mean_d, m.anti_d_tau - 2.0 * m.mean_d * m.mean_tau,
          m.var_tau()};
}

inline VarianceLawCoefficients variance_law_predict(const MomentumSpaceState& s,
                                                    HealthPolicy policy = HealthPolicy::strict) {
  check_cone_tip(s);
  return variance_law_from(compute_moments(s, policy));
}

/// Exact variance-law coefficients next to their sharp-energy approximations,
/// which replace sqrt(E^2 + c^2 p^2) by the scale <H>.
struct PeakedApproximationReport {
  double energy_scale = 0.0;  // <H>
  double exact_quad = 0.0;
  double approx_quad = 0.0;   // (Delta E)^2 / <H>^2
  double exact_lin = 0.0;
  double approx_lin = 0.0;    // (<[E, tau]_+> - 2<E><tau>) / <H>
  double sharpness = 0.0;     // Delta H / <H>
};

inline PeakedApproximationReport peaked_approximation_report(
    const MomentumSpaceState& s, HealthPolicy policy = HealthPolicy::strict) {
  check_cone_tip(s);
  const auto m = compute_moments(s, policy);
  if (!(m.mean_h > 0.0)) throw Error(Errc::invalid_argument, "<H> must be positive");
  const auto law = variance_law_from(m);
  PeakedApproximationReport r;
  r.energy_scale = m.mean_h;
  r.exact_quad = law.quad;
  r.approx_quad = m.var_e() / (m.mean_h * m.mean_h);
  r.exact_lin = law.lin;
  r.approx_lin = (m.anti_e_tau - 2.0 * m.mean_e * m.mean_tau) / m.mean_h;
  r.sharpness = std::sqrt(m.var_h()) / m.mean_h;
  return r;
}

inline constexpr double kSlowClockRatio = 1e-2;

/// Accumulated proper-time variance against the bound hbar t / <H>.
struct SaleckerWignerCheck {
  double t = 0.0;
  double lhs = 0.0;            // Var tau(t), simulated
  double rhs = 0.0;            // hbar t / <H>
  double rhs_rest = 0.0;       // hbar t / <E>, the rest-energy form
  bool slow = false;           // c^2 <p^2> <= kSlowClockRatio <E>^2
  bool satisfied = false;      // lhs >= rhs
  double margin = 0.0;         // lhs - rhs
  double sharpness = 0.0;
};

inline SaleckerWignerCheck salecker_wigner_check(const MomentumSpaceState& s, double t,
                                                 HealthPolicy policy = HealthPolicy::strict) {
  if (!(t >= 0.0)) throw Error(Errc::invalid_argument, "t must be nonnegative");
  check_cone_tip(s);
  const auto m0 = compute_moments(s, policy);
  if (!(m0.mean_h > 0.0)) throw Error(Errc::invalid_argument, "<H> must be positive");
  const auto sim = tau_moments_simulated(s, t, policy);
  const double c2 = s.units.c * s.units.c;
  SaleckerWignerCheck r;
  r.t = t;
  r.lhs = sim.var_tau;
  r.rhs = s.units.hbar * t / m0.mean_h;
  r.rhs_rest = s.units.hbar * t / m0.mean_e;
  r.slow = c2 * m0.mean_p2 <= kSlowClockRatio * m0.mean_e * m0.mean_e;
  r.satisfied = r.lhs >= r.rhs;
  r.margin = r.lhs - r.rhs;
  r.sharpness = std::sqrt(m0.var_h()) / m0.mean_h;
  return r;
}

struct UncertaintyProduct {
  double d_tau = 0.0;
  double d_e = 0.0;
  double d_m = 0.0;  // Delta E / c^2
  double product = 0.0;
  double lower = 0.0;  // hbar / 2
};

inline UncertaintyProduct uncertainty_product(const MomentumSpaceState& s,
                                              HealthPolicy policy = HealthPolicy::strict) {
  const auto m = compute_moments(s, policy);
  UncertaintyProduct u;
  u.d_tau = std::sqrt(std::max(0.0, m.var_tau()));
  u.d_e = std::sqrt(m.var_e());
  u.d_m = u.d_e / (s.units.c * s.units.c);
  u.product = u.d_tau * u.d_e;
  u.lower = 0.5 * s.units.hbar;
  return u;
}

}  // namespace clocklab::quantum

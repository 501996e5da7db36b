#pragma once

#include <cmath>
#include <functional>

#include "clocklab/classical/phase_space.hpp"

namespace clocklab::classical {

using Observable = std::function<double(const ExtendedPhaseSpacePoint&)>;

inline constexpr double kDefaultBracketStep = 1e-5;

namespace detail {

inline double partial(const Observable& obs, const ExtendedPhaseSpacePoint::Array& y,
                      std::size_t i, double h_step) {
  const double h = h_step * std::max(1.0, std::abs(y[i]));
  auto yp = y;
  auto ym = y;
  yp[i] += h;
  ym[i] -= h;
  return (obs(ExtendedPhaseSpacePoint::from_array(yp)) -
          obs(ExtendedPhaseSpacePoint::from_array(ym))) /
         (2.0 * h);
}

}  // namespace detail

/// Canonical Poisson bracket by central differences over the five conjugate pairs.
inline double poisson_bracket(const Observable& a, const Observable& b,
                              const ExtendedPhaseSpacePoint& pt,
                              double h_step = kDefaultBracketStep) {
  const auto y = pt.to_array();
  double sum = 0.0;
  for (const auto& [q, p] : kConjugatePairs) {
    sum += detail::partial(a, y, q, h_step) * detail::partial(b, y, p, h_step) -
           detail::partial(a, y, p, h_step) * detail::partial(b, y, q, h_step);
  }
  return sum;
}

namespace obs {

inline Observable tau() { return [](const ExtendedPhaseSpacePoint& p) { return p.tau; }; }
inline Observable p_tau() { return [](const ExtendedPhaseSpacePoint& p) { return p.p_tau; }; }
inline Observable mass() { return [](const ExtendedPhaseSpacePoint& p) { return p.M; }; }
inline Observable p_mass() { return [](const ExtendedPhaseSpacePoint& p) { return p.p_M; }; }
inline Observable x(int i) { return [i](const ExtendedPhaseSpacePoint& p) { return p.x[i]; }; }
inline Observable p(int i) { return [i](const ExtendedPhaseSpacePoint& p) { return p.p[i]; }; }
inline Observable phi1() { return [](const ExtendedPhaseSpacePoint& p) { return p.M - p.p_tau; }; }
inline Observable phi2() { return [](const ExtendedPhaseSpacePoint& p) { return p.p_M; }; }
inline Observable reduced_T() {
  return [](const ExtendedPhaseSpacePoint& p) { return p.tau - p.p_M; };
}
inline Observable reduced_E() { return [](const ExtendedPhaseSpacePoint& p) { return p.p_tau; }; }

}  // namespace obs

/// Dirac bracket for the second-class pair phi1 = M - p_tau, phi2 = p_M,
/// whose Poisson matrix is [[0, 1], [-1, 0]]:
/// {A,B}_D = {A,B} + {A,phi1}{phi2,B} - {A,phi2}{phi1,B}.
inline double dirac_bracket(const Observable& a, const Observable& b,
                            const ExtendedPhaseSpacePoint& pt,
                            double h_step = kDefaultBracketStep) {
  static const Observable phi1 = obs::phi1();
  static const Observable phi2 = obs::phi2();
  return poisson_bracket(a, b, pt, h_step) +
         poisson_bracket(a, phi1, pt, h_step) * poisson_bracket(phi2, b, pt, h_step) -
         poisson_bracket(a, phi2, pt, h_step) * poisson_bracket(phi1, b, pt, h_step);
}

}  // namespace clocklab::classical

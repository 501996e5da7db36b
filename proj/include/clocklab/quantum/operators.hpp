#pragma once

#include <cmath>
#include <complex>

#include "clocklab/quantum/state.hpp"

namespace clocklab::quantum {

enum class Observable { E, P, H, D, TAU, TAU_SQ };

inline constexpr double kImaginaryResidueLimit = 1e-8;

inline double hamiltonian_value(double e, double p, const UnitContext& u) {
  return std::sqrt(e * e + u.c * u.c * p * p);
}

/// E / sqrt(E^2 + c^2 p^2); the cone tip is excluded by construction.
inline double dilation_value(double e, double p, const UnitContext& u) {
  const double h = hamiltonian_value(e, p, u);
  return h == 0.0 ? 0.0 : e / h;
}

/// tau psi = i hbar d psi / dE.
inline ComplexField2D apply_tau(const MomentumSpaceState& s,
                                HealthPolicy policy = HealthPolicy::strict) {
  ComplexField2D out = spectral_derivative(s.psi, 1, policy);
  const Complex factor(0.0, s.units.hbar);
  for (auto& z : out.values) z *= factor;
  return out;
}

/// E psi.
inline ComplexField2D apply_energy(const MomentumSpaceState& s) {
  ComplexField2D out = s.psi;
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) out(ip, ie) *= s.energy(ie);
  }
  return out;
}

/// Pointwise exp(-i t sqrt(E^2 + c^2 p^2) / hbar) psi.
inline MomentumSpaceState evolve(const MomentumSpaceState& s, double t) {
  if (!std::isfinite(t)) throw Error(Errc::invalid_argument, "t must be finite");
  MomentumSpaceState out = s;
  if (t == 0.0) return out;
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) {
      const double phase = -t * hamiltonian_value(s.energy(ie), s.momentum(ip), s.units) /
                           s.units.hbar;
      out.psi(ip, ie) *= std::polar(1.0, phase);
    }
  }
  return out;
}

/// Every first and second moment the clock analysis needs, from one tau application.
struct StateMoments {
  double norm = 0.0;
  double mean_e = 0.0;
  double mean_e2 = 0.0;
  double mean_p = 0.0;
  double mean_p2 = 0.0;
  double mean_h = 0.0;
  double mean_h2 = 0.0;
  double mean_d = 0.0;
  double mean_d2 = 0.0;
  double mean_tau = 0.0;
  double mean_tau2 = 0.0;
  double anti_d_tau = 0.0;  // <D tau + tau D>
  double anti_e_tau = 0.0;  // <E tau + tau E>
  double tau_imag = 0.0;    // Im <psi|tau psi> / <psi|psi>

  double var_e() const { return std::max(0.0, mean_e2 - mean_e * mean_e); }
  double var_h() const { return std::max(0.0, mean_h2 - mean_h * mean_h); }
  double var_tau() const { return mean_tau2 - mean_tau * mean_tau; }
};

inline StateMoments compute_moments(const MomentumSpaceState& s,
                                    HealthPolicy policy = HealthPolicy::strict) {
  const ComplexField2D tau_psi = apply_tau(s, policy);
  StateMoments m;
  double n = 0, e1 = 0, e2 = 0, p1 = 0, p2 = 0, h1 = 0, h2 = 0, d1 = 0, d2 = 0;
  Complex t1{};
  double t2 = 0, adt = 0, aet = 0;
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    const double p = s.momentum(ip);
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) {
      const double e = s.energy(ie);
      const Complex psi = s.psi(ip, ie);
      const Complex tp = tau_psi(ip, ie);
      const double w = std::norm(psi);
      const double h = hamiltonian_value(e, p, s.units);
      const double d = dilation_value(e, p, s.units);
      const Complex overlap = std::conj(psi) * tp;
      n += w;
      e1 += w * e;
      e2 += w * e * e;
      p1 += w * p;
      p2 += w * p * p;
      h1 += w * h;
      h2 += w * h * h;
      d1 += w * d;
      d2 += w * d * d;
      t1 += overlap;
      t2 += std::norm(tp);
      adt += 2.0 * d * overlap.real();
      aet += 2.0 * e * overlap.real();
    }
  }
  const double measure = s.e_grid.step() * s.p_grid.step();
  m.norm = n * measure;
  m.mean_e = e1 / n;
  m.mean_e2 = e2 / n;
  m.mean_p = p1 / n;
  m.mean_p2 = p2 / n;
  m.mean_h = h1 / n;
  m.mean_h2 = h2 / n;
  m.mean_d = d1 / n;
  m.mean_d2 = d2 / n;
  m.mean_tau = t1.real() / n;
  m.tau_imag = t1.imag() / n;
  m.mean_tau2 = t2 / n;
  m.anti_d_tau = adt / n;
  m.anti_e_tau = aet / n;
  if (std::abs(m.tau_imag) >= kImaginaryResidueLimit * std::max(1.0, std::abs(m.mean_tau))) {
    throw Error(Errc::imaginary_residue,
                "Im<tau> = " + std::to_string(m.tau_imag) + " exceeds tolerance");
  }
  return m;
}

/// Real expectation value of a clock observable.
inline double expectation(const MomentumSpaceState& s, Observable o,
                          HealthPolicy policy = HealthPolicy::strict) {
  switch (o) {
    case Observable::TAU: return compute_moments(s, policy).mean_tau;
    case Observable::TAU_SQ: return compute_moments(s, policy).mean_tau2;
    case Observable::D: check_cone_tip(s); [[fallthrough]];
    default: break;
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    const double p = s.momentum(ip);
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) {
      const double e = s.energy(ie);
      const double w = std::norm(s.psi(ip, ie));
      double v = 0.0;
      switch (o) {
        case Observable::E: v = e; break;
        case Observable::P: v = p; break;
        case Observable::H: v = hamiltonian_value(e, p, s.units); break;
        case Observable::D: v = dilation_value(e, p, s.units); break;
        default: break;
      }
      num += w * v;
      den += w;
    }
  }
  return num / den;
}

/// || (tau E - E tau) psi - i hbar psi || / || psi ||.
inline double commutator_residual(const MomentumSpaceState& s,
                                  HealthPolicy policy = HealthPolicy::strict) {
  MomentumSpaceState e_state = s;
  e_state.psi = apply_energy(s);
  const ComplexField2D tau_e = apply_tau(e_state, policy);
  const ComplexField2D tau_psi = apply_tau(s, policy);
  const Complex ih(0.0, s.units.hbar);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) {
      const Complex r = tau_e(ip, ie) - s.energy(ie) * tau_psi(ip, ie) - ih * s.psi(ip, ie);
      num += std::norm(r);
      den += std::norm(s.psi(ip, ie));
    }
  }
  return std::sqrt(num / den);
}

}  // namespace clocklab::quantum

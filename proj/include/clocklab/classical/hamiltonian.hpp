#pragma once

#include <array>
#include <cmath>

#include "clocklab/classical/phase_space.hpp"
#include "clocklab/core/units.hpp"

namespace clocklab::classical {

/// A charged clock in a static background.
struct ClockSystem {
  StaticMetric metric = metrics::flat();
  double charge = 0.0;
  UnitContext units = UnitContext::natural();
};

namespace detail {

// Quantities shared by H and its partial derivatives at one phase-space point.
struct LocalTerms {
  double f = 1.0;
  Mat3 ginv = Mat3::Identity();
  Vec3 kinetic = Vec3::Zero();   // p_i - e A_i
  Vec3 raised = Vec3::Zero();    // g^ij (p_j - e A_j)
  double root = 0.0;             // sqrt(M^2 + c^2 g^ij (p_i - eA_i)(p_j - eA_j))
  double a0 = 0.0;
};

inline LocalTerms local_terms(const ExtendedPhaseSpacePoint& pt, const ClockSystem& sys) {
  const auto& m = sys.metric;
  m.check_at(pt.x);
  LocalTerms t;
  t.f = m.lapse(pt.x);
  const Mat3 g = m.spatial(pt.x);
  Eigen::FullPivLU<Mat3> lu(g);
  if (!lu.isInvertible()) throw Error(Errc::singular_metric, "spatial metric not invertible");
  t.ginv = lu.inverse();
  t.kinetic = pt.p - sys.charge * m.vector_potential(pt.x);
  t.raised = t.ginv * t.kinetic;
  const double c2 = sys.units.c * sys.units.c;
  const double arg = pt.M * pt.M + c2 * t.kinetic.dot(t.raised);
  if (!(arg > 0.0)) throw Error(Errc::degenerate_point, "vanishing square-root argument");
  t.root = std::sqrt(arg);
  t.a0 = m.potential(pt.x);
  return t;
}

}  // namespace detail

/// H0 = f sqrt(M^2 + c^2 g^ij (p_i - eA_i)(p_j - eA_j)) - c e A_0.
inline double base_hamiltonian(const ExtendedPhaseSpacePoint& pt, const ClockSystem& sys) {
  const auto t = detail::local_terms(pt, sys);
  return t.f * t.root - sys.units.c * sys.charge * t.a0;
}

/// Total Hamiltonian with the multipliers fixed by constraint consistency:
/// H = H0 - f M (M - p_tau) / sqrt(...).
inline double total_hamiltonian(const ExtendedPhaseSpacePoint& pt, const ClockSystem& sys) {
  const auto t = detail::local_terms(pt, sys);
  const double h0 = t.f * t.root - sys.units.c * sys.charge * t.a0;
  return h0 - t.f * pt.M * (pt.M - pt.p_tau) / t.root;
}

/// Time derivative of each canonical coordinate, laid out like the point itself.
using PhaseVelocity = ExtendedPhaseSpacePoint;

inline PhaseVelocity hamilton_rhs(const ExtendedPhaseSpacePoint& pt, const ClockSystem& sys) {
  const auto t = detail::local_terms(pt, sys);
  const auto& m = sys.metric;
  const double c = sys.units.c;
  const double c2 = c * c;
  const double e = sys.charge;
  const double phi1 = pt.M - pt.p_tau;
  const double s = t.root;
  const double s3 = s * s * s;

  PhaseVelocity d;
  d.tau = t.f * pt.M / s;
  d.p_tau = 0.0;
  d.M = 0.0;
  // -dH/dM = f phi1 (S^2 - M^2) / S^3, zero on the surface.
  d.p_M = t.f * phi1 * (s * s - pt.M * pt.M) / s3;
  // dH/dp_i = f c^2 g^ij pi_j / S * (1 + M phi1 / S^2)
  d.x = (t.f * c2 / s) * (1.0 + pt.M * phi1 / (s * s)) * t.raised;

  // -dH/dx^i. Q = g^jk pi_j pi_k with pi = p - eA.
  const Vec3 grad_f = m.lapse_gradient(pt.x);
  const auto grad_g = m.spatial_gradient(pt.x);
  const Vec3 grad_a0 = m.potential_gradient(pt.x);
  const Mat3 jac_a = m.vector_potential_jacobian(pt.x);
  for (int i = 0; i < 3; ++i) {
    // d_i g^jk = -g^ja (d_i g_ab) g^bk, so d_i g^jk pi_j pi_k = -raised^T (d_i g) raised.
    const double dq = -t.raised.dot(grad_g[i] * t.raised) - 2.0 * e * t.raised.dot(jac_a.col(i));
    const double ds = c2 * dq / (2.0 * s);
    const double dh = grad_f[i] * s + t.f * ds - c * e * grad_a0[i] -
                      pt.M * phi1 * (grad_f[i] / s - t.f * ds / (s * s));
    d.p[i] = -dh;
  }
  return d;
}

}  // namespace clocklab::classical

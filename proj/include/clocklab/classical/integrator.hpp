#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "clocklab/classical/hamiltonian.hpp"

namespace clocklab::classical {

struct Trajectory {
  std::vector<double> times;
  std::vector<ExtendedPhaseSpacePoint> points;
  double dt = 0.0;

  std::size_t size() const { return times.size(); }
};

/// Free motion, or a clock held at a fixed position by an external support.
enum class Support { free, held };

namespace detail {

inline ExtendedPhaseSpacePoint::Array axpy(const ExtendedPhaseSpacePoint::Array& y, double a,
                                           const ExtendedPhaseSpacePoint::Array& k) {
  ExtendedPhaseSpacePoint::Array out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = y[i] + a * k[i];
  return out;
}

inline ExtendedPhaseSpacePoint::Array rates(const ExtendedPhaseSpacePoint::Array& y,
                                            const ClockSystem& sys, Support support) {
  PhaseVelocity d = hamilton_rhs(ExtendedPhaseSpacePoint::from_array(y), sys);
  if (support == Support::held) {
    d.x.setZero();
    d.p.setZero();
  }
  return d.to_array();
}

}  // namespace detail

/// Classical RK4 with fixed step; the final step is shortened to land on t_end.
/// No constraint projection is applied.
inline Trajectory integrate(const ExtendedPhaseSpacePoint& pt0, const ClockSystem& sys,
                            double t_end, double dt, Support support = Support::free) {
  if (!(dt > 0.0)) throw Error(Errc::invalid_argument, "dt must be positive");
  if (!(t_end >= 0.0)) throw Error(Errc::invalid_argument, "t_end must be nonnegative");
  const auto c0 = constraints(pt0);
  const double scale = std::max(1.0, std::abs(pt0.M));
  if (std::abs(c0.phi1) >= 1e-12 * scale || std::abs(c0.phi2) >= 1e-12 * scale) {
    throw Error(Errc::off_constraint_surface,
                "phi1 = " + std::to_string(c0.phi1) + ", phi2 = " + std::to_string(c0.phi2));
  }

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.points.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.points.push_back(pt0);

  auto y = pt0.to_array();
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = (k + 1 == steps) ? t_end - t : dt;
    const auto k1 = detail::rates(y, sys, support);
    const auto k2 = detail::rates(detail::axpy(y, 0.5 * h, k1), sys, support);
    const auto k3 = detail::rates(detail::axpy(y, 0.5 * h, k2), sys, support);
    const auto k4 = detail::rates(detail::axpy(y, h, k3), sys, support);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    traj.times.push_back(k + 1 == steps ? t_end : t + dt);
    traj.points.push_back(ExtendedPhaseSpacePoint::from_array(y));
  }
  return traj;
}

struct DriftReport {
  double max_phi1 = 0.0;
  double max_phi2 = 0.0;
  double rel_energy = 0.0;  // max |H - H(0)| / |H(0)|
  double rel_mass = 0.0;    // max |M - M(0)| / |M(0)|

  double worst() const { return std::max({max_phi1, max_phi2, rel_energy, rel_mass}); }
};

inline DriftReport drift_report(const Trajectory& traj, const ClockSystem& sys) {
  DriftReport r;
  if (traj.points.empty()) return r;
  const double h0 = total_hamiltonian(traj.points.front(), sys);
  const double m0 = traj.points.front().M;
  for (const auto& pt : traj.points) {
    const auto c = constraints(pt);
    r.max_phi1 = std::max(r.max_phi1, std::abs(c.phi1));
    r.max_phi2 = std::max(r.max_phi2, std::abs(c.phi2));
    r.rel_energy =
        std::max(r.rel_energy, std::abs(total_hamiltonian(pt, sys) - h0) / std::abs(h0));
    r.rel_mass = std::max(r.rel_mass, std::abs(pt.M - m0) / std::abs(m0));
  }
  return r;
}

/// Column names for trajectory export; matches trajectory_row().
inline std::vector<std::string> trajectory_header() {
  return {"t", "tau", "p_tau", "M", "p_M", "x1", "x2", "x3",
          "p1", "p2", "p3", "phi1", "phi2", "H"};
}

inline std::vector<double> trajectory_row(double t, const ExtendedPhaseSpacePoint& pt,
                                          const ClockSystem& sys) {
  const auto c = constraints(pt);
  return {t,       pt.tau,  pt.p_tau, pt.M,   pt.p_M, pt.x[0], pt.x[1],
          pt.x[2], pt.p[0], pt.p[1],  pt.p[2], c.phi1, c.phi2,  total_hamiltonian(pt, sys)};
}

}  // namespace clocklab::classical

#pragma once

#include <algorithm>
#include <cmath>

#include "clocklab/classical/integrator.hpp"

namespace clocklab::classical {

namespace detail {

// Fourth-order central stencils on a uniform sample spacing h.
inline double d1(double fm2, double fm1, double fp1, double fp2, double h) {
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

inline double d2(double fm2, double fm1, double f0, double fp1, double fp2, double h) {
  return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

template <class Get>
double stencil_d1(const Trajectory& tr, std::size_t k, std::size_t s, double h, Get&& get) {
  return d1(get(tr.points[k - 2 * s]), get(tr.points[k - s]), get(tr.points[k + s]),
            get(tr.points[k + 2 * s]), h);
}

template <class Get>
double stencil_d2(const Trajectory& tr, std::size_t k, std::size_t s, double h, Get&& get) {
  return d2(get(tr.points[k - 2 * s]), get(tr.points[k - s]), get(tr.points[k]),
            get(tr.points[k + s]), get(tr.points[k + 2 * s]), h);
}

// True when samples k-2s .. k+2s are evenly spaced by h.
inline bool uniform_window(const Trajectory& tr, std::size_t k, std::size_t s, double h) {
  for (std::size_t j = k - 2 * s; j < k + 2 * s; j += s) {
    if (std::abs(tr.times[j + s] - tr.times[j] - h) > 1e-9 * h) return false;
  }
  return true;
}

inline std::size_t default_stride(const Trajectory& tr, double target) {
  if (tr.size() < 2) return 1;
  const double dt = tr.times[1] - tr.times[0];
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(target / dt)));
}

}  // namespace detail

/// Max over interior samples of |dtau/dt - sqrt(f^2 - g_ij xdot^i xdot^j / c^2)|,
/// with both rates taken from finite differences of the stored trajectory.
inline double proper_time_residual(const Trajectory& traj, const ClockSystem& sys) {
  const std::size_t s = 1;
  if (traj.size() < 4 * s + 1) return 0.0;
  const double h = traj.times[s] - traj.times[0];
  const double c2 = sys.units.c * sys.units.c;
  double worst = 0.0;
  for (std::size_t k = 2 * s; k + 2 * s < traj.size(); ++k) {
    if (!detail::uniform_window(traj, k, s, h)) continue;
    const double tau_rate = detail::stencil_d1(traj, k, s, h, [](const auto& p) { return p.tau; });
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
      v[i] = detail::stencil_d1(traj, k, s, h, [i](const auto& p) { return p.x[i]; });
    }
    const Vec3& x = traj.points[k].x;
    const double f = sys.metric.lapse(x);
    const double arg = f * f - v.dot(sys.metric.spatial(x) * v) / c2;
    worst = std::max(worst, std::abs(tau_rate - std::sqrt(std::max(arg, 0.0))));
  }
  return worst;
}

/// Residual of (M/c^2)[x'' + Gamma x' x'] = e f^rho_mu x'^mu along the path
/// reparameterized by proper time (x^0 = c t). Returns the max component norm.
inline double geodesic_lorentz_residual(const Trajectory& traj, const ClockSystem& sys) {
  for (std::size_t k = 1; k < traj.size(); ++k) {
    if (!(traj.points[k].tau > traj.points[k - 1].tau)) {
      throw Error(Errc::non_monotone, "tau does not increase at sample " + std::to_string(k));
    }
  }
  const std::size_t s = detail::default_stride(traj, 1e-2);
  if (traj.size() < 4 * s + 1) return 0.0;
  const double h = traj.times[s] - traj.times[0];
  const double c = sys.units.c;
  const double c2 = c * c;
  const double e = sys.charge;
  const auto& m = sys.metric;

  using Vec4 = Eigen::Vector4d;
  using Mat4 = Eigen::Matrix4d;

  double worst = 0.0;
  for (std::size_t k = 2 * s; k + 2 * s < traj.size(); ++k) {
    if (!detail::uniform_window(traj, k, s, h)) continue;
    const auto& pt = traj.points[k];
    auto tau_of = [](const auto& p) { return p.tau; };
    const double tau_t = detail::stencil_d1(traj, k, s, h, tau_of);
    const double tau_tt = detail::stencil_d2(traj, k, s, h, tau_of);
    if (!(tau_t > 0.0)) throw Error(Errc::non_monotone, "dtau/dt <= 0");

    Vec4 u(c, 0, 0, 0);  // d x^mu / dt
    Vec4 a = Vec4::Zero();
    for (int i = 0; i < 3; ++i) {
      auto xi = [i](const auto& p) { return p.x[i]; };
      u[i + 1] = detail::stencil_d1(traj, k, s, h, xi);
      a[i + 1] = detail::stencil_d2(traj, k, s, h, xi);
    }
    const Vec4 vel = u / tau_t;
    const Vec4 acc = (a * tau_t - u * tau_tt) / (tau_t * tau_t * tau_t);

    const double f = m.lapse(pt.x);
    const Vec3 grad_f = m.lapse_gradient(pt.x);
    const auto grad_g = m.spatial_gradient(pt.x);
    Mat4 g = Mat4::Zero();
    g(0, 0) = -f * f;
    g.bottomRightCorner<3, 3>() = m.spatial(pt.x);
    const Mat4 ginv = g.inverse();
    // dg[sigma](mu, nu) = d_sigma g_mu_nu; static, so sigma = 0 vanishes.
    std::array<Mat4, 4> dg;
    dg[0].setZero();
    for (int k3 = 0; k3 < 3; ++k3) {
      dg[k3 + 1].setZero();
      dg[k3 + 1](0, 0) = -2.0 * f * grad_f[k3];
      dg[k3 + 1].bottomRightCorner<3, 3>() = grad_g[k3];
    }

    // f_{mu nu} = d_mu A_nu - d_nu A_mu with A_mu = (A_0, A_i).
    Mat4 dA = Mat4::Zero();  // dA(mu, nu) = d_mu A_nu
    const Vec3 grad_a0 = m.potential_gradient(pt.x);
    const Mat3 jac_a = m.vector_potential_jacobian(pt.x);
    for (int k3 = 0; k3 < 3; ++k3) {
      dA(k3 + 1, 0) = grad_a0[k3];
      for (int i = 0; i < 3; ++i) dA(k3 + 1, i + 1) = jac_a(i, k3);
    }
    const Mat4 field = dA - dA.transpose();
    const Vec4 force = e * (ginv * (field * vel));

    for (int rho = 0; rho < 4; ++rho) {
      double gamma_term = 0.0;
      for (int mu = 0; mu < 4; ++mu) {
        for (int nu = 0; nu < 4; ++nu) {
          double gamma = 0.0;
          for (int sigma = 0; sigma < 4; ++sigma) {
            gamma += 0.5 * ginv(rho, sigma) *
                     (-dg[sigma](mu, nu) + dg[mu](nu, sigma) + dg[nu](sigma, mu));
          }
          gamma_term += gamma * vel[mu] * vel[nu];
        }
      }
      const double lhs = pt.M / c2 * (acc[rho] + gamma_term);
      worst = std::max(worst, std::abs(lhs - force[rho]));
    }
  }
  return worst;
}

}  // namespace clocklab::classical

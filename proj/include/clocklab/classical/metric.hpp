#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "clocklab/core/error.hpp"

namespace clocklab::classical {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Static gravitational and electromagnetic background.
///
/// g_00 = -f^2, g_0i = 0, g_ij and A_mu depend on the spatial position only.
/// Gradient callables are optional; empty ones fall back to central
/// differences with step `fd_step`.
struct StaticMetric {
  std::function<double(const Vec3&)> f;
  std::function<Mat3(const Vec3&)> g_spatial;
  std::function<double(const Vec3&)> a0;
  std::function<Vec3(const Vec3&)> a_spatial;

  std::function<Vec3(const Vec3&)> grad_f;
  std::function<std::array<Mat3, 3>(const Vec3&)> grad_g;  // [k](i, j) = d_k g_ij
  std::function<Vec3(const Vec3&)> grad_a0;
  std::function<Mat3(const Vec3&)> jac_a;  // (i, k) = d_k A_i

  double fd_step = 1e-6;

  double lapse(const Vec3& x) const { return f(x); }
  Mat3 spatial(const Vec3& x) const { return g_spatial ? g_spatial(x) : Mat3::Identity(); }
  double potential(const Vec3& x) const { return a0 ? a0(x) : 0.0; }
  Vec3 vector_potential(const Vec3& x) const { return a_spatial ? a_spatial(x) : Vec3::Zero(); }

  Vec3 lapse_gradient(const Vec3& x) const {
    if (grad_f) return grad_f(x);
    return fd_gradient([this](const Vec3& y) { return f(y); }, x);
  }

  std::array<Mat3, 3> spatial_gradient(const Vec3& x) const {
    if (grad_g) return grad_g(x);
    std::array<Mat3, 3> out;
    if (!g_spatial) {
      for (auto& m : out) m.setZero();
      return out;
    }
    for (int k = 0; k < 3; ++k) {
      const double h = step_for(x[k]);
      Vec3 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      out[k] = (g_spatial(xp) - g_spatial(xm)) / (2.0 * h);
    }
    return out;
  }

  Vec3 potential_gradient(const Vec3& x) const {
    if (grad_a0) return grad_a0(x);
    if (!a0) return Vec3::Zero();
    return fd_gradient([this](const Vec3& y) { return a0(y); }, x);
  }

  Mat3 vector_potential_jacobian(const Vec3& x) const {
    if (jac_a) return jac_a(x);
    if (!a_spatial) return Mat3::Zero();
    Mat3 out;
    for (int k = 0; k < 3; ++k) {
      const double h = step_for(x[k]);
      Vec3 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      out.col(k) = (a_spatial(xp) - a_spatial(xm)) / (2.0 * h);
    }
    return out;
  }

  /// Throws when x is outside the metric's domain (f <= 0) or g_ij is not SPD.
  void check_at(const Vec3& x) const {
    const double lapse_value = f(x);
    if (!(lapse_value > 0.0) || !std::isfinite(lapse_value)) {
      throw Error(Errc::outside_domain, "lapse f <= 0 at probed position");
    }
    const Mat3 g = spatial(x);
    if (!g.isApprox(g.transpose(), 1e-12)) {
      throw Error(Errc::singular_metric, "spatial metric not symmetric");
    }
    Eigen::LLT<Mat3> llt(g);
    if (llt.info() != Eigen::Success) {
      throw Error(Errc::singular_metric, "spatial metric not positive definite");
    }
  }

 private:
  double step_for(double coord) const { return fd_step * std::max(1.0, std::abs(coord)); }

  template <class F>
  Vec3 fd_gradient(F&& fn, const Vec3& x) const {
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
      const double h = step_for(x[k]);
      Vec3 xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      out[k] = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return out;
  }
};

namespace metrics {

inline StaticMetric flat() {
  StaticMetric m;
  m.f = [](const Vec3&) { return 1.0; };
  m.grad_f = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
  m.g_spatial = [](const Vec3&) -> Mat3 { return Mat3::Identity(); };
  m.grad_g = [](const Vec3&) {
    std::array<Mat3, 3> z;
    for (auto& mat : z) mat.setZero();
    return z;
  };
  return m;
}

/// Uniform field along x^1: f = 1 + g x^1 / c^2, flat spatial part.
inline StaticMetric weak_field(double g, double c) {
  StaticMetric m = flat();
  const double k = g / (c * c);
  m.f = [k](const Vec3& x) { return 1.0 + k * x[0]; };
  m.grad_f = [k](const Vec3&) -> Vec3 { return Vec3(k, 0.0, 0.0); };
  return m;
}

/// Weak field of a point mass in isotropic coordinates:
/// f^2 = 1 + 2 Phi / c^2, g_ij = (1 - 2 Phi / c^2) delta_ij, Phi = -GM / r.
inline StaticMetric isotropic_weak_field(double gm, double c) {
  StaticMetric m;
  const double c2 = c * c;
  m.f = [gm, c2](const Vec3& x) {
    const double arg = 1.0 - 2.0 * gm / (x.norm() * c2);
    return arg > 0.0 ? std::sqrt(arg) : -1.0;
  };
  m.grad_f = [gm, c2](const Vec3& x) -> Vec3 {
    const double r = x.norm();
    const double fval = std::sqrt(1.0 - 2.0 * gm / (r * c2));
    // d f / d x^k = (GM / (c^2 r^3 f)) x^k
    return (gm / (c2 * r * r * r * fval)) * x;
  };
  m.g_spatial = [gm, c2](const Vec3& x) -> Mat3 {
    return (1.0 + 2.0 * gm / (x.norm() * c2)) * Mat3::Identity();
  };
  m.grad_g = [gm, c2](const Vec3& x) {
    const double r = x.norm();
    std::array<Mat3, 3> out;
    for (int k = 0; k < 3; ++k) out[k] = (-2.0 * gm * x[k] / (c2 * r * r * r)) * Mat3::Identity();
    return out;
  };
  return m;
}

/// Flat space with a linear scalar potential A_0 = field . x.
inline StaticMetric uniform_potential(const Vec3& field) {
  StaticMetric m = flat();
  m.a0 = [field](const Vec3& x) { return field.dot(x); };
  m.grad_a0 = [field](const Vec3&) -> Vec3 { return field; };
  return m;
}

}  // namespace metrics

}  // namespace clocklab::classical

#pragma once

#include <array>
#include <cstddef>

#include "clocklab/classical/metric.hpp"

namespace clocklab::classical {

/// Canonical coordinates of the clock with proper time and rest energy promoted
/// to dynamical variables.
struct ExtendedPhaseSpacePoint {
  double tau = 0.0;
  double p_tau = 0.0;
  double M = 0.0;
  double p_M = 0.0;
  Vec3 x = Vec3::Zero();
  Vec3 p = Vec3::Zero();

  static constexpr std::size_t kDim = 10;
  using Array = std::array<double, kDim>;

  // Layout: tau, p_tau, M, p_M, x1, x2, x3, p1, p2, p3.
  Array to_array() const {
    return {tau, p_tau, M, p_M, x[0], x[1], x[2], p[0], p[1], p[2]};
  }

  static ExtendedPhaseSpacePoint from_array(const Array& a) {
    ExtendedPhaseSpacePoint pt;
    pt.tau = a[0];
    pt.p_tau = a[1];
    pt.M = a[2];
    pt.p_M = a[3];
    pt.x = Vec3(a[4], a[5], a[6]);
    pt.p = Vec3(a[7], a[8], a[9]);
    return pt;
  }

  /// A point on the constraint surface (p_tau = M, p_M = 0).
  static ExtendedPhaseSpacePoint on_surface(double tau, double M, const Vec3& x, const Vec3& p) {
    if (!(M > 0.0)) throw Error(Errc::invalid_argument, "rest energy M must be positive");
    return {tau, M, M, 0.0, x, p};
  }
};

/// Index pairs (q, p) of the five conjugate pairs in the array layout.
inline constexpr std::array<std::array<std::size_t, 2>, 5> kConjugatePairs{
    {{0, 1}, {2, 3}, {4, 7}, {5, 8}, {6, 9}}};

struct ConstraintPair {
  double phi1 = 0.0;  // M - p_tau
  double phi2 = 0.0;  // p_M
};

inline ConstraintPair constraints(const ExtendedPhaseSpacePoint& pt) {
  return {pt.M - pt.p_tau, pt.p_M};
}

/// (T, E) = (tau - p_M, p_tau); equals (tau, M) on the constraint surface.
struct ReducedPair {
  double T = 0.0;
  double E = 0.0;
};

inline ReducedPair reduced_canonical_pair(const ExtendedPhaseSpacePoint& pt) {
  return {pt.tau - pt.p_M, pt.p_tau};
}

}  // namespace clocklab::classical

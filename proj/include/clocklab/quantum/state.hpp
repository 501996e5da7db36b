#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "clocklab/core/field.hpp"
#include "clocklab/core/quadrature.hpp"
#include "clocklab/core/spectral.hpp"
#include "clocklab/core/units.hpp"

namespace clocklab::quantum {

/// Clock wavefunction psi(E, p) in the rest-energy / momentum representation.
///
/// Storage is psi.axis0 = p, psi.axis1 = E, so lines along E are contiguous.
struct MomentumSpaceState {
  UniformGrid e_grid;
  UniformGrid p_grid;
  ComplexField2D psi;
  UnitContext units;

  double energy(std::size_t ie) const { return e_grid.node(ie); }
  double momentum(std::size_t ip) const { return p_grid.node(ip); }
  double norm_squared() const { return trapezoid_norm_squared(psi); }
};

/// Product Gaussian with |psi|^2 widths sigma_e, sigma_p and phases that place
/// the proper-time and position expectations at tau0 and x0.
struct GaussianClockSpec {
  double e0 = 10.0;
  double sigma_e = 0.5;
  double tau0 = 0.0;
  double p0 = 0.0;
  double sigma_p = 0.5;
  double x0 = 0.0;
};

struct GridPlan {
  std::size_t e_points = 1024;
  std::size_t p_points = 256;
  double window_sigmas = 12.0;
};

inline constexpr double kCoverageSigmas = 8.0;
inline constexpr std::size_t kConeTipCells = 5;
inline constexpr double kSupportThreshold = 1e-10;

/// Grids centred on the spec with `window_sigmas` half-widths. The E-axis point
/// count grows (in powers of two) until the conjugate proper-time window holds
/// every tau the state reaches up to |t| <= t_horizon.
inline std::pair<UniformGrid, UniformGrid> plan_grids(const GaussianClockSpec& spec,
                                                      double t_horizon, const UnitContext& units,
                                                      const GridPlan& plan = {}) {
  if (!(spec.sigma_e > 0.0) || !(spec.sigma_p > 0.0)) {
    throw Error(Errc::invalid_argument, "Gaussian widths must be positive");
  }
  const double half_e = plan.window_sigmas * spec.sigma_e;
  const double half_p = plan.window_sigmas * spec.sigma_p;
  const double dtau0 = units.hbar / (2.0 * spec.sigma_e);
  const double reach = std::abs(spec.tau0) + std::abs(t_horizon) + 10.0 * dtau0;
  // Half-width of the tau window is pi hbar / dE with dE = 2 half_e / n; the
  // state must stay inside the inner three quarters checked by the tail test.
  const double needed = 2.0 * half_e * reach / (0.75 * std::numbers::pi * units.hbar);
  const std::size_t n_e =
      next_pow2(std::max(plan.e_points, static_cast<std::size_t>(std::ceil(needed))));
  return {UniformGrid(spec.e0 - half_e, spec.e0 + half_e, n_e),
          UniformGrid(spec.p0 - half_p, spec.p0 + half_p, next_pow2(plan.p_points))};
}

/// Throws undefined_dilation when the state has support within kConeTipCells
/// grid cells of E = p = 0, where E / sqrt(E^2 + c^2 p^2) is 0/0.
inline void check_cone_tip(const MomentumSpaceState& s) {
  const double peak = max_abs(s.psi.values);
  if (peak == 0.0) return;
  const double e_reach = static_cast<double>(kConeTipCells) * s.e_grid.step();
  const double p_reach = static_cast<double>(kConeTipCells) * s.p_grid.step();
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    if (std::abs(s.momentum(ip)) > p_reach) continue;
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) {
      if (std::abs(s.energy(ie)) > e_reach) continue;
      if (std::abs(s.psi(ip, ie)) > kSupportThreshold * peak) {
        throw Error(Errc::undefined_dilation, "state has support at the E = p = 0 cone tip");
      }
    }
  }
}

/// Samples amplitude(E, p), normalizes, and validates band-limit health.
template <class Amplitude>
MomentumSpaceState make_state(const UniformGrid& e_grid, const UniformGrid& p_grid,
                              const UnitContext& units, Amplitude&& amplitude) {
  MomentumSpaceState s{e_grid, p_grid, ComplexField2D(p_grid, e_grid), units};
  for (std::size_t ip = 0; ip < p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < e_grid.size(); ++ie) {
      s.psi(ip, ie) = amplitude(e_grid.node(ie), p_grid.node(ip));
    }
  }
  const double norm2 = s.norm_squared();
  if (!(norm2 > 0.0)) throw Error(Errc::invalid_argument, "amplitude vanishes on the grid");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& z : s.psi.values) z *= scale;

  const double ratio = boundary_ratio(s.psi);
  if (!(ratio < kBandLimitThreshold)) {
    throw Error(Errc::grid_too_small,
                "boundary amplitude ratio " + std::to_string(ratio) + " on the state grid");
  }
  check_cone_tip(s);
  return s;
}

inline MomentumSpaceState make_gaussian_state(const GaussianClockSpec& spec,
                                              const UniformGrid& e_grid,
                                              const UniformGrid& p_grid,
                                              const UnitContext& units) {
  if (!(spec.sigma_e > 0.0) || !(spec.sigma_p > 0.0)) {
    throw Error(Errc::invalid_argument, "Gaussian widths must be positive");
  }
  auto covers = [](const UniformGrid& g, double centre, double sigma) {
    return centre - kCoverageSigmas * sigma >= g.min() &&
           centre + kCoverageSigmas * sigma <= g.max();
  };
  if (!covers(e_grid, spec.e0, spec.sigma_e) || !covers(p_grid, spec.p0, spec.sigma_p)) {
    throw Error(Errc::grid_too_small, "grid windows must cover 8 sigma about the centres");
  }
  const double hbar = units.hbar;
  return make_state(e_grid, p_grid, units, [&](double e, double p) {
    const double de = e - spec.e0;
    const double dp = p - spec.p0;
    const double mag = std::exp(-de * de / (4.0 * spec.sigma_e * spec.sigma_e) -
                                dp * dp / (4.0 * spec.sigma_p * spec.sigma_p));
    return std::polar(mag, (-e * spec.tau0 + p * spec.x0) / hbar);
  });
}

/// Convenience overload using plan_grids().
inline MomentumSpaceState make_gaussian_state(const GaussianClockSpec& spec, double t_horizon,
                                              const UnitContext& units,
                                              const GridPlan& plan = {}) {
  const auto [e_grid, p_grid] = plan_grids(spec, t_horizon, units, plan);
  return make_gaussian_state(spec, e_grid, p_grid, units);
}

/// |psi|^2 integrated over p, sampled on the E grid.
inline std::vector<double> energy_marginal(const MomentumSpaceState& s) {
  std::vector<double> out(s.e_grid.size(), 0.0);
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) out[ie] += std::norm(s.psi(ip, ie));
  }
  for (auto& v : out) v *= s.p_grid.step();
  return out;
}

/// |psi|^2 integrated over E, sampled on the p grid.
inline std::vector<double> momentum_marginal(const MomentumSpaceState& s) {
  std::vector<double> out(s.p_grid.size(), 0.0);
  for (std::size_t ip = 0; ip < s.p_grid.size(); ++ip) {
    for (std::size_t ie = 0; ie < s.e_grid.size(); ++ie) out[ip] += std::norm(s.psi(ip, ie));
  }
  for (auto& v : out) v *= s.e_grid.step();
  return out;
}

}  // namespace clocklab::quantum

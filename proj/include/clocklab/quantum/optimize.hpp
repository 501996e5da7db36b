#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "clocklab/quantum/clock.hpp"

namespace clocklab::quantum {

struct GoldenResult {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Golden-section minimization of a unimodal function on [a, b].
inline GoldenResult golden_section_minimize(const std::function<double(double)>& f, double a,
                                            double b, double tol, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && std::abs(b - a) > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc < fd ? GoldenResult{c, fc, evals} : GoldenResult{d, fd, evals};
}

struct OptimizeOptions {
  double sigma_min = 0.0;  // 0 selects 1e-3 |e0|
  double sigma_max = 0.0;  // 0 selects |e0| / 12, keeping the cone tip unreached
  double log_tol = 1e-4;
  int scan_points = 17;
  GridPlan grids{};
};

struct OptimizeResult {
  double sigma_e_opt = 0.0;
  double min_var = 0.0;
  double bound = 0.0;       // hbar t / <H> at the optimum
  double rest_bound = 0.0;  // hbar t / <E> at the optimum
  double energy_scale = 0.0;
  int evaluations = 0;
};

/// Simulated Var tau(t) of the Gaussian clock with energy width sigma_e.
inline double clock_variance_at(double e0, double sigma_e, double p0, double sigma_p, double t,
                                const UnitContext& units, const GridPlan& plan = {}) {
  const GaussianClockSpec spec{e0, sigma_e, 0.0, p0, sigma_p, 0.0};
  return tau_moments_simulated(make_gaussian_state(spec, t, units, plan), t).var_tau;
}

/// Minimizes the simulated Var tau(t) over the energy width, searching in log sigma_e.
/// A coarse log scan locates the basin; golden-section search refines it. Throws
/// bracket_failure when the scan minimum sits on the search boundary.
inline OptimizeResult optimize_clock_width(double e0, double p0, double sigma_p, double t,
                                           const UnitContext& units,
                                           const OptimizeOptions& opt = {}) {
  if (!(t > 0.0)) throw Error(Errc::invalid_argument, "t must be positive");
  const double lo = opt.sigma_min > 0.0 ? opt.sigma_min : 1e-3 * std::abs(e0);
  const double hi = opt.sigma_max > 0.0 ? opt.sigma_max : std::abs(e0) / 12.0;
  if (!(hi > lo) || !(lo > 0.0)) throw Error(Errc::invalid_argument, "empty sigma_e range");
  const int n = std::max(opt.scan_points, 5);

  int evals = 0;
  auto objective = [&](double log_sigma) {
    ++evals;
    return clock_variance_at(e0, std::exp(log_sigma), p0, sigma_p, t, units, opt.grids);
  };

  const double u_lo = std::log(lo);
  const double u_hi = std::log(hi);
  const double du = (u_hi - u_lo) / (n - 1);
  std::vector<double> values(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = objective(u_lo + k * du);
  const auto best = static_cast<int>(std::min_element(values.begin(), values.end()) -
                                     values.begin());
  if (best == 0 || best == n - 1) {
    std::ostringstream msg;
    msg << "minimum of Var tau(t) on the scan lies at the boundary sigma_e = "
        << std::exp(u_lo + best * du) << " (value " << values[static_cast<std::size_t>(best)]
        << ", bound hbar t/<H> would be ~" << units.hbar * t / std::hypot(e0, units.c * p0)
        << ")";
    throw Error(Errc::bracket_failure, msg.str());
  }

  const auto g = golden_section_minimize(objective, u_lo + (best - 1) * du,
                                         u_lo + (best + 1) * du, opt.log_tol);
  OptimizeResult r;
  r.sigma_e_opt = std::exp(g.x);
  r.min_var = g.value;
  const auto state = make_gaussian_state({e0, r.sigma_e_opt, 0.0, p0, sigma_p, 0.0}, t, units,
                                         opt.grids);
  const auto m = compute_moments(state);
  r.energy_scale = m.mean_h;
  r.bound = units.hbar * t / m.mean_h;
  r.rest_bound = units.hbar * t / m.mean_e;
  r.evaluations = evals;
  return r;
}

}  // namespace clocklab::quantum

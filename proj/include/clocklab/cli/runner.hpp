#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "clocklab/classical/brackets.hpp"
#include "clocklab/classical/integrator.hpp"
#include "clocklab/classical/residuals.hpp"
#include "clocklab/cli/config.hpp"
#include "clocklab/cli/csv.hpp"
#include "clocklab/gedanken.hpp"
#include "clocklab/quantum/clock.hpp"
#include "clocklab/quantum/optimize.hpp"

namespace clocklab::cli {

struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct Table {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

struct MemberResult {
  Table table;
  std::vector<Check> checks;
};

struct RunReport {
  ScenarioConfig scenario;
  std::string output;
  std::size_t rows_written = 0;
  std::vector<Check> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  int exit_code() const { return all_passed() ? 0 : 1; }
};

// ---------------------------------------------------------------------------
// Seeded probes
//
// Probe k of stream s under seed S is splitmix64(splitmix64(S + (s + 1) * G) + k * G)
// with G = 0x9e3779b97f4a7c15, mapped to [0, 1) from its top 53 bits. Streams are
// independent of one another and of how many draws other streams make.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed + (stream + 1) * kGolden)) {}

  double uniform(std::uint64_t counter) const {
    return static_cast<double>(splitmix64(key_ + counter * kGolden) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t counter, double lo, double hi) const {
    return lo + (hi - lo) * uniform(counter);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
};

// ---------------------------------------------------------------------------
// Parallel sweeps

/// Worker count: CLOCKLAB_THREADS when set to a positive integer, otherwise the
/// hardware concurrency.
inline std::size_t thread_budget() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CLOCKLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
  }
  return n;
}

/// Runs body(i) for i in [0, n) on up to `threads` workers. The exception of
/// the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), n);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Scenario members

namespace detail {

inline Check bounded(std::string name, double measured, double tolerance) {
  return {std::move(name), measured <= tolerance, measured, tolerance};
}

inline MemberResult run_gedanken_box(const ScenarioConfig& cfg) {
  gedanken::BoxExperiment exp{cfg.number("dq"), cfg.number("t"), cfg.number("g"), {}, {}};
  const bool spring = cfg.source.count("spring.k") && cfg.source.count("spring.l");
  if (spring) {
    exp.spring_k = cfg.number("spring.k");
    exp.spring_l = cfg.number("spring.l");
  }
  const auto r = gedanken::box_uncertainties(exp, cfg.unit_context());
  MemberResult out;
  out.table.header = {"dq",      "t",         "g",           "delta_p",
                      "delta_m", "delta_tau", "product_ratio", "product_ratio_hbar_half",
                      "spring_mass"};
  const CsvValue mass = spring ? CsvValue(gedanken::spring_mass(*exp.spring_k, *exp.spring_l, exp.g))
                               : CsvValue(std::string{});
  out.table.rows.push_back({exp.delta_q, exp.t, exp.g, r.delta_p, r.delta_m, r.delta_tau,
                            r.product_ratio, r.product_ratio_hbar_half, mass});
  out.checks.push_back(bounded("product_ratio", std::abs(r.product_ratio - 1.0), 1e-12));
  return out;
}

inline MemberResult run_gedanken_efield(const ScenarioConfig& cfg) {
  const gedanken::EFieldExperiment exp{cfg.number("dq"), cfg.number("t"), cfg.number("efield"),
                                       cfg.number("charge"), cfg.number("v")};
  const auto r = gedanken::efield_uncertainties(exp, cfg.unit_context());
  MemberResult out;
  out.table.header = {"dq",      "t",       "efield",    "charge",        "v", "mass",
                      "delta_p", "delta_m", "delta_tau", "product_ratio", "product_ratio_hbar_half"};
  out.table.rows.push_back({exp.delta_q, exp.t, exp.e_field, exp.charge, exp.v,
                            gedanken::efield_mass(exp), r.delta_p, r.delta_m, r.delta_tau,
                            r.product_ratio, r.product_ratio_hbar_half});
  out.checks.push_back(bounded("product_ratio", std::abs(r.product_ratio - 1.0), 1e-12));
  return out;
}

inline classical::StaticMetric build_metric(const ScenarioConfig& cfg) {
  using namespace classical;
  const std::string kind = cfg.text("metric.kind");
  if (kind == "weak_field") {
    const double g = cfg.number("metric.g") != 0.0 ? cfg.natural("metric.g") : UnitContext::natural().g;
    return metrics::weak_field(g, 1.0);
  }
  if (kind == "isotropic") {
    const double rg = cfg.natural("metric.rg");
    if (!(rg > 0.0)) throw Error(Errc::invalid_argument, "isotropic metric needs metric.rg > 0");
    return metrics::isotropic_weak_field(rg, 1.0);
  }
  if (kind == "uniform_potential") {
    return metrics::uniform_potential(
        Vec3(cfg.number("metric.field1"), cfg.number("metric.field2"), cfg.number("metric.field3")));
  }
  return metrics::flat();
}

inline MemberResult run_classical_trajectory(const ScenarioConfig& cfg) {
  using namespace classical;
  ClockSystem sys;
  sys.metric = build_metric(cfg);
  sys.charge = cfg.number("classical.charge");
  const double M = cfg.natural("classical.M");
  const Vec3 x0(cfg.natural("classical.x1"), cfg.natural("classical.x2"), cfg.natural("classical.x3"));
  const Vec3 v(cfg.natural("classical.v1"), cfg.natural("classical.v2"), cfg.natural("classical.v3"));
  const double tau0 = cfg.natural("classical.tau0");
  const double t_end = cfg.natural("classical.t_end");
  const auto support = cfg.text("classical.support") == "held" ? Support::held : Support::free;
  if (support == Support::held && v.norm() != 0.0)
    throw Error(Errc::invalid_argument, "a held clock starts at rest");

  // Canonical momentum reproducing coordinate velocity v on the constraint surface:
  // S = M / sqrt(1 - v.g.v / f^2), pi = g v S / f, p = pi + e A.
  sys.metric.check_at(x0);
  const double f = sys.metric.lapse(x0);
  const Mat3 g = sys.metric.spatial(x0);
  const double beta2 = v.dot(g * v) / (f * f);
  if (!(beta2 < 1.0)) throw Error(Errc::superluminal, "initial velocity reaches the light cone");
  const double S = M / std::sqrt(1.0 - beta2);
  const Vec3 p = g * v * (S / f) + sys.charge * sys.metric.vector_potential(x0);
  const auto pt0 = ExtendedPhaseSpacePoint::on_surface(tau0, M, x0, p);

  const double dt = cfg.natural("classical.dt");
  if (t_end / dt > 1e8) throw Error(Errc::invalid_argument, "more than 1e8 integration steps");
  const auto traj = integrate(pt0, sys, t_end, dt, support);
  const auto every = static_cast<std::size_t>(cfg.number("classical.every"));
  MemberResult out;
  out.table.header = trajectory_header();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % every != 0 && k + 1 != traj.size()) continue;
    const auto row = trajectory_row(traj.times[k], traj.points[k], sys);
    out.table.rows.emplace_back(row.begin(), row.end());
  }

  const auto drift = drift_report(traj, sys);
  out.checks.push_back(bounded("constraint_drift",
                               std::max(drift.max_phi1, drift.max_phi2) / std::max(1.0, std::abs(M)),
                               1e-9));
  out.checks.push_back(bounded("conservation", std::max(drift.rel_energy, drift.rel_mass), 1e-9));
  out.checks.push_back(bounded("proper_time", proper_time_residual(traj, sys), 1e-8));

  const std::string metric = cfg.text("metric.kind");
  std::optional<double> expected;
  if (support == Support::held)
    expected = tau0 + f * t_end;
  else if (metric == "flat" || (metric == "uniform_potential" && sys.charge == 0.0))
    expected = tau0 + t_end * std::sqrt(1.0 - v.squaredNorm());
  if (expected) {
    const double tau = traj.points.back().tau;
    out.checks.push_back(
        bounded("tau_final", std::abs(tau - *expected) / std::max(1.0, std::abs(*expected)), 1e-9));
  }
  return out;
}

inline MemberResult run_classical_brackets(const ScenarioConfig& cfg) {
  using namespace classical;
  using Arr = ExtendedPhaseSpacePoint::Array;
  constexpr std::size_t n = ExtendedPhaseSpacePoint::kDim;
  const char* names[n] = {"tau", "p_tau", "M", "p_M", "x1", "x2", "x3", "p1", "p2", "p3"};

  // Exact brackets of coordinates: J(a, b) = {y_a, y_b}.
  auto J = [](std::size_t a, std::size_t b) {
    for (const auto& [q, p] : kConjugatePairs) {
      if (a == q && b == p) return 1.0;
      if (a == p && b == q) return -1.0;
    }
    return 0.0;
  };
  // Constraint gradients: phi1 = M - p_tau, phi2 = p_M.
  Arr dphi1{}, dphi2{};
  dphi1[2] = 1.0;
  dphi1[1] = -1.0;
  dphi2[3] = 1.0;
  auto bracket_with = [&](std::size_t a, const Arr& grad) {
    double s = 0.0;
    for (std::size_t b = 0; b < n; ++b) s += J(a, b) * grad[b];
    return s;
  };
  auto expected = [&](std::size_t a, std::size_t b) {
    return J(a, b) + bracket_with(a, dphi1) * -bracket_with(b, dphi2) -
           bracket_with(a, dphi2) * -bracket_with(b, dphi1);
  };

  std::vector<Observable> coords;
  for (std::size_t a = 0; a < n; ++a)
    coords.push_back([a](const ExtendedPhaseSpacePoint& pt) { return pt.to_array()[a]; });

  const auto points = static_cast<std::size_t>(cfg.number("brackets.points"));
  const double h = cfg.number("brackets.h");
  const double scale = cfg.number("brackets.scale");
  if (!(h > 0.0) || !(scale > 0.0))
    throw Error(Errc::invalid_argument, "brackets.h and brackets.scale must be positive");
  MemberResult out;
  out.table.header = {"point", "a", "b", "poisson", "dirac", "expected"};
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const CounterStream rng(cfg.seed, i);
    Arr y{};
    for (std::size_t k = 0; k < n; ++k) y[k] = rng.uniform(k, -scale, scale);
    y[2] = rng.uniform(2, 0.5, 0.5 + scale);  // rest energy stays positive
    const auto pt = ExtendedPhaseSpacePoint::from_array(y);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const double pb = poisson_bracket(coords[a], coords[b], pt, h);
        const double db = dirac_bracket(coords[a], coords[b], pt, h);
        const double ex = expected(a, b);
        worst = std::max(worst, std::abs(db - ex));
        out.table.rows.push_back({static_cast<std::int64_t>(i), std::string(names[a]),
                                  std::string(names[b]), pb, db, ex});
      }
    }
  }
  out.checks.push_back(bounded("dirac_table", worst, 1e-6));
  return out;
}

inline quantum::GridPlan grid_plan(const ScenarioConfig& cfg) {
  return {static_cast<std::size_t>(cfg.number("grid.e.n")),
          static_cast<std::size_t>(cfg.number("grid.p.n")), cfg.number("grid.window")};
}

inline quantum::GaussianClockSpec state_spec(const ScenarioConfig& cfg) {
  return {cfg.natural("quantum.e0"), cfg.natural("quantum.sigma_e"), cfg.natural("quantum.tau0"),
          cfg.natural("quantum.p0"), cfg.natural("quantum.sigma_p"), cfg.natural("quantum.x0")};
}

inline constexpr double kPeakedSharpness = 0.05;

inline MemberResult run_quantum_moments(const ScenarioConfig& cfg, bool bound_check) {
  using namespace quantum;
  const auto nat = UnitContext::natural();
  const double t_max = cfg.natural("quantum.t_max");
  const auto count = static_cast<std::size_t>(cfg.number("quantum.t_count"));
  const auto s = make_gaussian_state(state_spec(cfg), t_max, nat, grid_plan(cfg));
  const auto m0 = compute_moments(s);
  const auto law = variance_law_from(m0);
  const double sharpness = std::sqrt(m0.var_h()) / m0.mean_h;

  MemberResult out;
  out.table.header = {"t",    "mean_tau", "var_tau_sim", "var_tau_law", "quad",     "lin",
                      "const", "bound",   "satisfied",   "sharpness"};
  double law_err = 0.0, mean_err = 0.0, violation = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const double t = count == 1 ? t_max : t_max * static_cast<double>(k) / (count - 1);
    const auto sim = tau_moments_simulated(s, t);
    const double predicted = law.predict(t);
    const double bound = nat.hbar * t / m0.mean_h;
    law_err = std::max(law_err, std::abs(sim.var_tau - predicted) / std::abs(predicted));
    mean_err = std::max(mean_err, std::abs(sim.mean_tau - (m0.mean_d * t + m0.mean_tau)) /
                                      std::max(1.0, std::abs(sim.mean_tau)));
    if (t > 0.0 && sharpness <= kPeakedSharpness)
      violation = std::max(violation, (bound - sim.var_tau) / bound);
    out.table.rows.push_back({t, sim.mean_tau, sim.var_tau, predicted, law.quad, law.lin, law.const_,
                              bound, std::string(sim.var_tau >= bound ? "true" : "false"), sharpness});
  }
  const auto u = uncertainty_product(s);
  out.checks.push_back(bounded("uncertainty_floor", u.lower - u.product, 1e-6));
  out.checks.push_back(bounded("variance_law", law_err, 1e-7));
  out.checks.push_back(bounded("mean_linearity", mean_err, 1e-8));
  out.checks.push_back(bounded("unitarity", std::abs(evolve(s, t_max).norm_squared() - 1.0), 1e-12));
  if (bound_check) out.checks.push_back(bounded("sw_bound", violation, 0.0));
  return out;
}

inline MemberResult run_quantum_optimize(const ScenarioConfig& cfg) {
  using namespace quantum;
  const auto nat = UnitContext::natural();
  OptimizeOptions opt;
  opt.sigma_min = cfg.natural("optimize.sigma_min");
  opt.sigma_max = cfg.natural("optimize.sigma_max");
  opt.scan_points = static_cast<int>(cfg.number("optimize.scan_points"));
  opt.log_tol = cfg.number("optimize.log_tol");
  opt.grids = grid_plan(cfg);
  const double e0 = cfg.natural("quantum.e0"), p0 = cfg.natural("quantum.p0");
  const double sigma_p = cfg.natural("quantum.sigma_p"), t = cfg.natural("quantum.t");
  const auto r = optimize_clock_width(e0, p0, sigma_p, t, nat, opt);

  MemberResult out;
  out.table.header = {"e0",         "p0",         "sigma_p",      "t",          "sigma_e_opt",
                      "min_var",    "bound",      "rest_bound",   "energy_scale", "evaluations"};
  out.table.rows.push_back({e0, p0, sigma_p, t, r.sigma_e_opt, r.min_var, r.bound, r.rest_bound,
                            r.energy_scale, static_cast<std::int64_t>(r.evaluations)});
  auto within = [&](std::string name, double bound) {
    const bool ok = r.min_var >= bound - 1e-3 && r.min_var <= 1.05 * bound;
    return Check{std::move(name), ok, r.min_var / bound, 0.05};
  };
  out.checks.push_back(within("sw_bound", r.bound));
  if (p0 == 0.0) out.checks.push_back(within("sw_bound_rest", r.rest_bound));
  return out;
}

}  // namespace detail

/// Runs one configuration without its sweep.
inline MemberResult run_member(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case Kind::gedanken_box: return detail::run_gedanken_box(cfg);
    case Kind::gedanken_efield: return detail::run_gedanken_efield(cfg);
    case Kind::classical_trajectory: return detail::run_classical_trajectory(cfg);
    case Kind::classical_brackets: return detail::run_classical_brackets(cfg);
    case Kind::quantum_moments: return detail::run_quantum_moments(cfg, false);
    case Kind::quantum_bound_sweep: return detail::run_quantum_moments(cfg, true);
    case Kind::quantum_optimize: return detail::run_quantum_optimize(cfg);
  }
  throw Error(Errc::configuration, "unhandled kind");
}

inline std::string default_output(Kind kind) {
  std::string s(to_string(kind));
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s + ".csv";
}

/// Runs a scenario, sweep members in parallel, and writes the merged CSV.
/// A check fails overall when it fails for any sweep member; the reported
/// measurement is that of the first failing member, else of the first member.
inline RunReport run(const ScenarioConfig& cfg, std::size_t threads = thread_budget()) {
  std::vector<ScenarioConfig> members;
  if (cfg.sweep) {
    for (double v : cfg.sweep->values) {
      ScenarioConfig m = cfg;
      m.sweep.reset();
      m.numbers[cfg.sweep->param] = v;
      m.source[cfg.sweep->param] = format_number(v);
      members.push_back(std::move(m));
    }
  } else {
    members.push_back(cfg);
  }

  std::vector<MemberResult> results(members.size());
  parallel_for(members.size(), threads, [&](std::size_t i) {
    try {
      results[i] = run_member(members[i]);
    } catch (const Error& e) {
      if (!cfg.sweep) throw;
      throw Error(e.code(), cfg.sweep->param + " = " + format_number(cfg.sweep->values[i]) + ": " +
                                e.what());
    }
  });

  Table merged;
  RunReport report;
  report.scenario = cfg;
  report.output = cfg.output.empty() ? default_output(cfg.kind) : cfg.output;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    if (cfg.sweep) {
      if (i == 0) {
        merged.header.push_back(cfg.sweep->param);
        merged.header.insert(merged.header.end(), r.table.header.begin(), r.table.header.end());
      }
      for (auto& row : r.table.rows) {
        row.insert(row.begin(), cfg.sweep->values[i]);
        merged.rows.push_back(std::move(row));
      }
    } else {
      merged = std::move(r.table);
    }
    for (const auto& c : r.checks) {
      auto it = std::find_if(report.checks.begin(), report.checks.end(),
                             [&](const Check& x) { return x.name == c.name; });
      if (it == report.checks.end())
        report.checks.push_back(c);
      else if (it->passed && !c.passed)
        *it = c;
    }
  }
  report.rows_written = emit_csv(merged.rows, merged.header, report.output);
  return report;
}

inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json scenario;
  scenario["kind"] = std::string(to_string(r.scenario.kind));
  scenario["units"] = r.scenario.units == UnitSystem::si ? "SI" : "NATURAL";
  scenario["output"] = r.output;
  scenario["seed"] = r.scenario.seed;
  scenario["params"] = r.scenario.source;
  if (r.scenario.sweep) {
    scenario["sweep"] = {{"param", r.scenario.sweep->param}, {"values", r.scenario.sweep->values}};
  }
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back(
        {{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"tolerance", c.tolerance}});
  }
  return {{"scenario", scenario},
          {"rows_written", r.rows_written},
          {"checks", checks},
          {"passed", r.all_passed()}};
}

}  // namespace clocklab::cli

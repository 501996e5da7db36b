// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "clocklab/classical/brackets.hpp"
#include "clocklab/classical/integrator.hpp"
#include "clocklab/classical/residuals.hpp"
#include "clocklab/cli/runner.hpp"
#include "clocklab/gedanken.hpp"
#include "clocklab/quantum/clock.hpp"
#include "clocklab/quantum/optimize.hpp"

using namespace clocklab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool ok = o.passed && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-34s %6.2fs (budget %gs)  %s%s\n", ok ? "PASS" : "FAIL", id, title, secs,
              budget_s, o.detail.c_str(), in_time ? "" : "  [over budget]");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const UnitContext nat = UnitContext::natural();

quantum::MomentumSpaceState chirped(double e0, double sigma, double beta, double sigma_p) {
  const quantum::GaussianClockSpec spec{e0, sigma, 0.0, 0.0, sigma_p, 0.0};
  const auto [eg, pg] = quantum::plan_grids(spec, 0.0, nat);
  return quantum::make_state(eg, pg, nat, [&](double e, double p) {
    const double de = e - e0;
    return std::polar(std::exp(-de * de / (4 * sigma * sigma) - p * p / (4 * sigma_p * sigma_p)),
                      beta * de * de);
  });
}

quantum::MomentumSpaceState two_hump(double e0, double sigma, double a, double sigma_p) {
  const UniformGrid eg(e0 - a - 12 * sigma, e0 + a + 12 * sigma, 1024);
  const UniformGrid pg(-12 * sigma_p, 12 * sigma_p, 256);
  auto g = [&](double x) { return std::exp(-x * x / (4 * sigma * sigma)); };
  return quantum::make_state(eg, pg, nat, [&](double e, double p) {
    return Complex((g(e - e0 - a) + g(e - e0 + a)) * std::exp(-p * p / (4 * sigma_p * sigma_p)), 0.0);
  });
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args, const fs::path& dir, int threads) {
  const std::string cmd = "cd '" + dir.string() + "' && CLOCKLAB_THREADS=" + std::to_string(threads) +
                          " '" + CLOCKLAB_CLI_PATH + "' " + args + " -q > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  std::printf("clocklab acceptance suite\n");

  criterion(1, "gedanken cancellation", 1.0, [] {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lu(-8.0, 2.0);
    const auto si = UnitContext::si();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double dq = std::pow(10.0, lu(rng)), t = std::pow(10.0, lu(rng) + 2);
      const double g = std::pow(10.0, lu(rng) + 3), v = si.c * std::pow(10.0, lu(rng) - 2.5);
      const double e = std::pow(10.0, lu(rng)), q = std::pow(10.0, lu(rng));
      worst = std::max(worst, std::abs(gedanken::box_uncertainties({dq, t, g, {}, {}}, si).product_ratio - 1));
      worst = std::max(worst, std::abs(gedanken::efield_uncertainties({dq, t, e, q, v}, si).product_ratio - 1));
    }
    return Outcome{worst <= 1e-12, fmt("max |ratio - 1| = %.2e over 2x100 sets (tol 1e-12)", worst)};
  });

  criterion(2, "Dirac bracket table", 5.0, [] {
    using namespace classical;
    // Table of Dirac brackets between canonical variables:
    // {tau, p_tau} = {tau, M} = 1, {x^i, p_j} = delta, the others 0.
    auto table = [](std::size_t a, std::size_t b) {
      auto one = [](std::size_t u, std::size_t v) {
        return (u == 0 && (v == 1 || v == 2)) || (u >= 4 && u <= 6 && v == u + 3);
      };
      return one(a, b) ? 1.0 : one(b, a) ? -1.0 : 0.0;
    };
    std::vector<Observable> y;
    for (std::size_t a = 0; a < 10; ++a)
      y.push_back([a](const ExtendedPhaseSpacePoint& p) { return p.to_array()[a]; });
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
      const cli::CounterStream rng(2024, i);
      ExtendedPhaseSpacePoint::Array arr{};
      for (std::size_t k = 0; k < 10; ++k) arr[k] = rng.uniform(k, -3.0, 3.0);
      arr[2] = rng.uniform(2, 0.5, 3.0);
      const auto pt = ExtendedPhaseSpacePoint::from_array(arr);
      for (std::size_t a = 0; a < 10; ++a)
        for (std::size_t b = 0; b < 10; ++b)
          if (a != b) worst = std::max(worst, std::abs(dirac_bracket(y[a], y[b], pt, 1e-5) - table(a, b)));
    }
    return Outcome{worst <= 1e-6, fmt("max deviation %.2e over 50 points x 90 pairs (tol 1e-6)", worst)};
  });

  criterion(3, "proper time and red shift", 5.0, [] {
    using namespace classical;
    ClockSystem flat;
    const double v = 0.6, S = 1.0 / std::sqrt(1 - v * v);
    const auto tr = integrate(ExtendedPhaseSpacePoint::on_surface(0, 1, Vec3::Zero(), Vec3(S * v, 0, 0)), flat,
                              10.0, 1e-3);
    const double tau_err = std::abs(tr.points.back().tau - 8.0);
    const double resid = proper_time_residual(tr, flat);

    ClockSystem weak;
    const double g = 1e-3, q = 2.0;
    weak.metric = metrics::weak_field(g, 1.0);
    const auto held = integrate(ExtendedPhaseSpacePoint::on_surface(0, 1, Vec3(q, 0, 0), Vec3::Zero()), weak,
                                10.0, 1e-3, Support::held);
    const double rate = (held.points.back().tau - 10.0) / 10.0;
    const double shift_err = std::abs(rate - g * q) / (g * q);
    const bool ok = tau_err <= 1e-9 && resid <= 1e-8 && shift_err <= 1e-8;
    return Outcome{ok, fmt("|tau-8| = %.1e (1e-9), residual %.1e (1e-8), red shift rel err %.1e (1e-8)",
                           tau_err, resid, shift_err)};
  });

  criterion(4, "constraint and conservation drift", 5.0, [] {
    using namespace classical;
    struct Case {
      const char* name;
      ClockSystem sys;
      ExtendedPhaseSpacePoint pt;
      Support support = Support::free;
    };
    std::vector<Case> cases;
    {
      ClockSystem s;
      cases.push_back({"flat", s, ExtendedPhaseSpacePoint::on_surface(0, 1, Vec3::Zero(), Vec3(0.75, 0.2, 0))});
      s.metric = metrics::weak_field(0.01, 1.0);
      cases.push_back({"free fall", s, ExtendedPhaseSpacePoint::on_surface(0, 2, Vec3(1, 0, 0), Vec3(0, 0.3, 0))});
      cases.push_back({"held", s, ExtendedPhaseSpacePoint::on_surface(0, 2, Vec3(1, 0, 0), Vec3::Zero()),
                       Support::held});
      s.metric = metrics::isotropic_weak_field(1e-3, 1.0);
      const double vc = std::sqrt(1e-3);
      cases.push_back({"orbit", s, ExtendedPhaseSpacePoint::on_surface(0, 1, Vec3(1, 0, 0), Vec3(0, vc, 0))});
      s.metric = metrics::uniform_potential(Vec3(0.05, 0, 0.02));
      s.charge = 1.5;
      cases.push_back({"charged", s, ExtendedPhaseSpacePoint::on_surface(0, 1, Vec3::Zero(), Vec3(0.1, 0, 0))});
    }
    double worst = 0.0;
    std::string worst_case;
    for (const auto& c : cases) {
      const auto tr = integrate(c.pt, c.sys, 10.0, 1e-3, c.support);
      const double d = drift_report(tr, c.sys).worst();
      if (d >= worst) {
        worst = d;
        worst_case = c.name;
      }
    }
    return Outcome{worst <= 1e-9, fmt("worst drift %.2e (%s) over %zu trajectories of 1e4 steps (tol 1e-9)",
                                      worst, worst_case.c_str(), cases.size())};
  });

  criterion(5, "commutator [tau, E] = i hbar", 2.0, [] {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> e0(5, 30), sig(0.1, 1.0), tau0(-5, 5), p0(-3, 3);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double sign = i % 2 ? -1.0 : 1.0;
      const auto s = quantum::make_gaussian_state({sign * e0(rng), sig(rng), tau0(rng), p0(rng), sig(rng), 0.0},
                                                  0.0, nat);
      worst = std::max(worst, quantum::commutator_residual(s));
    }
    return Outcome{worst <= 1e-8, fmt("max relative residual %.2e over 20 states (tol 1e-8)", worst)};
  });

  criterion(6, "uncertainty floor", 5.0, [] {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> e0(20, 30), sig(0.1, 1.0), beta(0.1, 1.0), sep(1.0, 4.0),
        tau0(-5, 5), p0(-3, 3);
    double min_excess = 1e300, gauss_dev = 0.0, max_product = 0.0;
    for (int i = 0; i < 50; ++i) {
      quantum::MomentumSpaceState s = [&] {
        if (i < 20) return quantum::make_gaussian_state({e0(rng), sig(rng), tau0(rng), p0(rng), sig(rng), 0.0}, 0.0, nat);
        if (i < 35) return chirped(e0(rng), sig(rng), beta(rng), sig(rng));
        const double sigma = sig(rng);
        return two_hump(e0(rng), sigma, sep(rng) * sigma, sig(rng));
      }();
      const auto u = quantum::uncertainty_product(s);
      min_excess = std::min(min_excess, u.product - u.lower);
      max_product = std::max(max_product, u.product);
      if (i < 20) gauss_dev = std::max(gauss_dev, std::abs(u.product - u.lower));
    }
    const bool ok = min_excess >= -1e-6 && gauss_dev <= 1e-6;
    return Outcome{ok, fmt("min(product - hbar/2) = %.2e (>= -1e-6), Gaussian |product - hbar/2| <= %.2e "
                           "(1e-6), largest product %.2f",
                           min_excess, gauss_dev, max_product)};
  });

  criterion(7, "exact variance law", 10.0, [] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> e0(8, 20), sig(0.2, 1.0), tau0(-10, 10), p0(-8, 8);
    double law_err = 0.0, mean_err = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double sign = i == 9 ? -1.0 : 1.0;
      const auto s = quantum::make_gaussian_state(
          {sign * e0(rng), sig(rng), tau0(rng), p0(rng), sig(rng), 0.0}, 100.0, nat);
      const auto m0 = quantum::compute_moments(s);
      const auto law = quantum::variance_law_from(m0);
      for (double t : {1.0, 10.0, 100.0}) {
        const auto sim = quantum::tau_moments_simulated(s, t);
        law_err = std::max(law_err, std::abs(sim.var_tau - law.predict(t)) / law.predict(t));
        mean_err = std::max(mean_err, std::abs(sim.mean_tau - m0.mean_tau - m0.mean_d * t) /
                                          std::max(1.0, std::abs(sim.mean_tau)));
      }
    }
    const bool ok = law_err <= 1e-7 && mean_err <= 1e-8;
    return Outcome{ok, fmt("variance rel err %.2e (1e-7), mean linearity %.2e (1e-8), 10 specs x 3 times",
                           law_err, mean_err)};
  });

  criterion(8, "Gaussian cross term", 2.0, [] {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> e0(5, 20), sig(0.1, 1.0), tau0(-50, 50), p0(-5, 5);
    double worst = 0.0;
    for (int i = 0; i < 12; ++i) {
      const auto s = quantum::make_gaussian_state({e0(rng), sig(rng), tau0(rng), p0(rng), sig(rng), 0.0}, 0.0, nat);
      worst = std::max(worst, std::abs(quantum::variance_law_predict(s).lin));
    }
    return Outcome{worst <= 1e-9, fmt("max |lin| = %.2e over 12 Gaussians with tau0 in [-50, 50] (tol 1e-9)", worst)};
  });

  criterion(9, "time-keeping bound hbar t / E", 20.0, [] {
    // (a) Peaked Gaussian family at rest: is Var tau(t) >= hbar t / <H> everywhere?
    int tested = 0, violated = 0;
    double worst_ratio = 1e300;
    for (int k = 0; k < 8; ++k) {
      const double sigma = 0.05 * std::pow(10.0, k / 7.0);
      const auto s = quantum::make_gaussian_state({10.0, sigma, 0.0, 0.0, 0.05, 0.0}, 100.0, nat);
      for (double t : {1.0, 10.0, 100.0}) {
        const auto c = quantum::salecker_wigner_check(s, t);
        if (c.sharpness > 0.05) continue;
        ++tested;
        if (!c.satisfied) ++violated;
        worst_ratio = std::min(worst_ratio, c.lhs / c.rhs);
      }
    }
    // (b) Optimizer, boosted clock: min Var tau(t) relative to hbar t / <H>.
    const auto boosted = quantum::optimize_clock_width(10.0, 7.5, 0.05, 100.0, nat);
    const double boosted_ratio = boosted.min_var / boosted.bound;
    // (c) Optimizer at rest: compare with hbar t / <E>.
    std::string rest;
    bool rest_ok = false;
    try {
      const auto r = quantum::optimize_clock_width(10.0, 0.0, 0.05, 100.0, nat);
      rest_ok = std::abs(r.min_var / r.rest_bound - 1.0) <= 0.05;
      rest = fmt("rest min/bound %.3f", r.min_var / r.rest_bound);
    } catch (const Error& e) {
      rest = std::string("rest optimizer: ") + e.what();
    }
    const bool ok = violated == 0 && std::abs(boosted_ratio - 1.0) <= 0.05 && rest_ok;
    return Outcome{ok, fmt("peaked family: %d of %d (sigma_e, t) points below bound, min lhs/rhs %.3g; "
                           "boosted optimum min/bound %.3f (want 1 +- 0.05); %s",
                           violated, tested, worst_ratio, boosted_ratio, rest.c_str())};
  });

  criterion(10, "negative-energy clock", 5.0, [] {
    const auto s = quantum::make_gaussian_state({-10.0, 0.5, 0.0, 0.0, 0.5, 0.0}, 100.0, nat);
    const auto m0 = quantum::compute_moments(s);
    const auto law = quantum::variance_law_from(m0);
    double prev = 1e300, law_err = 0.0, unit_err = 0.0;
    bool decreasing = true;
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      const auto sim = quantum::tau_moments_simulated(s, t);
      decreasing = decreasing && sim.mean_tau < prev;
      prev = sim.mean_tau;
      law_err = std::max(law_err, std::abs(sim.var_tau - law.predict(t)) / law.predict(t));
      unit_err = std::max(unit_err, std::abs(quantum::evolve(s, t).norm_squared() - 1.0));
    }
    const bool ok = m0.mean_d < 0 && decreasing && law_err <= 1e-7 && unit_err <= 1e-12;
    return Outcome{ok, fmt("<E> = %.3f, <D> = %.6f, mean_tau(100) = %.3f, variance rel err %.1e, "
                           "norm drift %.1e",
                           m0.mean_e, m0.mean_d, prev, law_err, unit_err)};
  });

  criterion(11, "CLI determinism and exit codes", 60.0, [] {
    const fs::path dir = fs::temp_directory_path() / "clocklab_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, std::string>> scenarios = {
        {"gedanken box", "--set units=SI --set dq=1e-6 --set t=1 --set g=9.81"},
        {"gedanken efield", "--set units=SI --set dq=1e-6 --set t=1 --set efield=1 --set charge=1 --set v=1e3"},
        {"classical trajectory", "--set classical.M=1 --set classical.v1=0.6 --set classical.t_end=10"},
        {"classical brackets", "--set seed=99 --set brackets.points=20"},
        {"quantum moments", "--set quantum.t_max=100"},
        {"quantum bound", "--set quantum.t_count=3 --set sweep.param=sigma_e --set sweep.min=0.1 "
                          "--set sweep.max=0.5 --set sweep.count=6 --set sweep.spacing=log"},
        {"quantum optimize", "--set quantum.p0=7.5 --set quantum.sigma_p=0.05 --set optimize.scan_points=9"},
    };
    int identical = 0;
    std::string mismatch;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      const auto& [cmd, sets] = scenarios[i];
      std::string out[2], rep[2];
      for (int r = 0; r < 2; ++r) {
        const std::string tag = std::to_string(i) + "_" + std::to_string(r);
        run_cli(cmd + " " + sets + " --set output=o" + tag + ".csv --set report=r" + tag + ".json", dir,
                r == 0 ? 1 : 4);
        out[r] = slurp(dir / ("o" + tag + ".csv"));
        rep[r] = slurp(dir / ("r" + tag + ".json"));
      }
      const bool same = !out[0].empty() && out[0] == out[1] && rep[0].size() > 0;
      // Reports echo the output path, which differs between the two runs by name only.
      if (same) ++identical; else mismatch += " " + cmd;
    }
    std::ofstream(dir / "no_t.cfg") << "dq = 1e-6\ng = 9.81\n";
    std::ofstream(dir / "bad_unit.cfg") << "units = SI\ndq = 1 s\nt = 1\ng = 9.81\n";
    std::ofstream(dir / "bad_kind.cfg") << "kind = TELEPORT\n";
    const int c1 = run_cli("gedanken box --config no_t.cfg", dir, 1);
    const int c2 = run_cli("gedanken box --config bad_unit.cfg", dir, 1);
    const int c3 = run_cli("run --config bad_kind.cfg", dir, 1);
    const int c4 = run_cli("gedanken box --config absent.cfg", dir, 1);
    const int c5 = run_cli("quantum moments --set quantum.sigma_e=2 --set quantum.t_max=1", dir, 1);
    const bool codes = c1 == 2 && c2 == 2 && c3 == 2 && c4 == 2 && c5 == 3;
    const bool ok = identical == static_cast<int>(scenarios.size()) && codes;
    return Outcome{ok, fmt("%d/%zu kinds byte-identical (1 vs 4 threads)%s; config errors exit %d %d %d %d "
                           "(want 2), runtime error exit %d (want 3)",
                           identical, scenarios.size(), mismatch.c_str(), c1, c2, c3, c4, c5)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

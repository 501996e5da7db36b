#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "clocklab/gedanken.hpp"

using namespace clocklab;
using namespace clocklab::gedanken;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected clocklab::Error";
  return Errc::invalid_argument;
}

// Values quoted with the h and c of the SI context (h = 6.62607015e-34 J s).
const UnitContext si = UnitContext::si(9.81);

}  // namespace

TEST(SpringMass, BalancesSpringAgainstGravity) {
  EXPECT_NEAR(spring_mass(10.0, 0.981, 9.81), 1.0, 1e-15);
  EXPECT_EQ(spring_mass(10.0, 0.0, 9.81), 0.0);
  EXPECT_EQ(code_of([] { spring_mass(10.0, 1.0, 0.0); }), Errc::invalid_gravity);
}

TEST(BoxExperiment, ReferenceValues) {
  const auto r = box_uncertainties({1e-6, 1.0, 9.81, {}, {}}, si);
  EXPECT_NEAR(r.delta_p, 6.62607015e-28, 1e-40);
  EXPECT_NEAR(r.delta_m, 6.754e-29, 0.001e-29);
  EXPECT_NEAR(r.delta_tau, 1.092e-22, 0.001e-22);
  EXPECT_NEAR(r.product_ratio, 1.0, 1e-12);
  EXPECT_NEAR(r.product_ratio_hbar_half, 4.0 * M_PI, 1e-11);
}

TEST(BoxExperiment, ScalingInDeltaQ) {
  const auto a = box_uncertainties({2e-6, 3.0, 9.81, {}, {}}, si);
  const auto b = box_uncertainties({4e-6, 3.0, 9.81, {}, {}}, si);
  EXPECT_NEAR(b.delta_m, a.delta_m / 2, 1e-15 * a.delta_m);
  EXPECT_NEAR(b.delta_tau, 2 * a.delta_tau, 1e-15 * b.delta_tau);
  EXPECT_NEAR(a.product_ratio, b.product_ratio, 1e-15);
}

TEST(BoxExperiment, RejectsInvalid) {
  EXPECT_EQ(code_of([] { box_uncertainties({0.0, 1.0, 9.81, {}, {}}, si); }),
            Errc::invalid_argument);
  EXPECT_EQ(code_of([] { box_uncertainties({1e-6, 1.0, -1.0, {}, {}}, si); }),
            Errc::invalid_gravity);
}

TEST(EFieldExperiment, ReferenceValues) {
  const auto r = efield_uncertainties({1e-6, 1.0, 1.0, 1.0, 1e3}, si);
  EXPECT_NEAR(r.delta_m, 6.626e-31, 0.001e-31);
  EXPECT_NEAR(r.delta_tau, 1.113e-20, 0.001e-20);
  EXPECT_NEAR(r.product_ratio, 1.0, 1e-12);
}

TEST(EFieldExperiment, AtRestCannotWeigh) {
  EXPECT_EQ(code_of([] { efield_uncertainties({1e-6, 1.0, 1.0, 1.0, 0.0}, si); }), Errc::at_rest);
  EXPECT_EQ(code_of([] { efield_uncertainties({1e-6, 1.0, 1.0, 1.0, 3e8}, si); }),
            Errc::superluminal);
}

TEST(EFieldExperiment, MassFromAcceleration) {
  EXPECT_NEAR(efield_mass({1e-6, 2.0, 5.0, 3.0, 4.0}), 3.0 * 5.0 * 2.0 / 4.0, 1e-15);
}

TEST(DilationFactor, KnownValues) {
  const auto nat = UnitContext::natural();
  EXPECT_EQ(dilation_factor(0.0, nat), 1.0);
  EXPECT_NEAR(dilation_factor(0.6, nat), 0.8, 1e-15);
  EXPECT_NEAR(dilation_factor(0.99 * si.c, si), 0.14107, 1e-5);
  EXPECT_EQ(code_of([&] { dilation_factor(nat.c, nat); }), Errc::superluminal);
}

TEST(DilationFactor, MonotoneDecreasing) {
  const auto nat = UnitContext::natural();
  double prev = 2.0;
  for (int k = 0; k < 1000; ++k) {
    const double v = k / 1000.0;
    const double f = dilation_factor(v, nat);
    EXPECT_LT(f, prev);
    prev = f;
  }
}

TEST(ProductRatio, CancelsForRandomExperiments) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> logu(-9.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double dq = std::pow(10.0, logu(rng));
    const double t = std::pow(10.0, logu(rng) + 3);
    const double g = std::pow(10.0, logu(rng) + 4);
    const double v = si.c * std::pow(10.0, logu(rng) - 1.5);
    EXPECT_NEAR(box_uncertainties({dq, t, g, {}, {}}, si).product_ratio, 1.0, 1e-12);
    EXPECT_NEAR(efield_uncertainties({dq, t, 1.0, 1.0, v}, si).product_ratio, 1.0, 1e-12);
  }
}

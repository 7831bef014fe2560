#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "qsstokes/analysis/rates.hpp"
#include "qsstokes/analysis/spectrum.hpp"

using namespace qss;

TEST(Analysis, SpectrumAndRegimes) {
  const PhysParams p = PhysParams::with_theta(1.0, 1.0, 3.0);
  const auto r = analytic_spectrum(p, 4);
  EXPECT_DOUBLE_EQ(r.modes[0].analytic, -1.0);
  EXPECT_DOUBLE_EQ(r.modes[1].analytic, -(4.0 + 3.0) / 8.0);
  EXPECT_EQ(r.regime, Regime::stable);
  // sigma < Theta branch
  EXPECT_NEAR(*decay_bound(p), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(*decay_bound(PhysParams::with_theta(1.0, 1.0, 0.0)), 0.25, 1e-15);
  EXPECT_EQ(regime_of(PhysParams::with_theta(1.0, 1.0, -1.0)), Regime::neutral);
  EXPECT_EQ(regime_of(PhysParams::with_theta(1.0, 1.0, -2.0)), Regime::unstable);
  EXPECT_FALSE(decay_bound(PhysParams::with_theta(1.0, 1.0, -2.0)).has_value());
}

TEST(Analysis, NumericJacobianSmallGrid) {
  PeriodicGrid g(32);
  const PhysParams p = PhysParams::with_theta(1.0, 1.0, 3.0);
  const auto r = numeric_jacobian_at_zero(p, g, 8);
  for (const auto& e : r.modes) {
    EXPECT_LT(e.rel_error, 1e-6) << e.k;
    EXPECT_NEAR(e.numeric, e.numeric_sin, 1e-9);
    EXPECT_LT(e.leakage, 1e-8);
  }
  EXPECT_LT(r.constant_response, 1e-8);
  EXPECT_THROW(numeric_jacobian_at_zero(p, g, 9), InvalidArgument);
}

TEST(Analysis, DecayFitFlagsBadData) {
  PeriodicGrid g(16);
  std::vector<Snapshot> none;
  EXPECT_FALSE(decay_rate_fit(none).reliable);
  std::vector<Snapshot> zeros;
  for (int i = 0; i < 20; ++i) zeros.push_back({0.1 * i, i, Profile::zero(g)});
  EXPECT_FALSE(decay_rate_fit(zeros).reliable);
  std::vector<Snapshot> clean;
  for (int i = 0; i < 40; ++i)
    clean.push_back({0.1 * i, i, Profile::from_function(g, [&](double x) { return 1e-5 * std::exp(-0.3 * 0.1 * i) * std::cos(x); })});
  const auto fit = decay_rate_fit(clean);
  EXPECT_TRUE(fit.reliable);
  EXPECT_NEAR(fit.rate, 0.3, 1e-12);
}

TEST(Analysis, DecayBoundIsBelowEveryMode) {
  // theta0 <= (sigma k^2 + Theta)/(4 mu k) for all k >= 1, attained at k = 1 when sigma >= Theta
  for (auto [s, th, mu] : {std::tuple{1.0, 0.0, 1.0}, std::tuple{1.0, 3.0, 1.0}, std::tuple{2.0, 50.0, 0.5},
                           std::tuple{3.0, 1.0, 2.0}}) {
    const PhysParams p = PhysParams::with_theta(mu, s, th);
    const auto r = analytic_spectrum(p, 64);
    double slowest = 1e300;
    for (const auto& e : r.modes) slowest = std::min(slowest, -e.analytic);
    EXPECT_GE(slowest, *r.theta0 * (1 - 1e-14));
    if (s >= th) {
      EXPECT_NEAR(slowest, *r.theta0, 1e-14);
    }
    // continuous minimum over k > 0 sits at k = sqrt(Theta/sigma)
    if (th > s) {
      EXPECT_NEAR(std::sqrt(s * th) / (2 * mu), *r.theta0, 1e-14);
    }
  }
}

TEST(Analysis, ModeGrowthFit) {
  PeriodicGrid g(16);
  std::vector<Snapshot> snaps;
  for (int i = 0; i < 60; ++i) {
    const double a = 1e-6 * std::exp(0.4 * 0.5 * i);
    snaps.push_back({0.5 * i, i, Profile::from_function(g, [&](double x) { return a * std::cos(x) + 1e-9 * std::sin(3 * x); })});
  }
  const auto fit = mode_growth_fit(snaps, 1, 1e-3);
  EXPECT_TRUE(fit.reliable);
  EXPECT_NEAR(fit.rate, 0.4, 1e-12);
  // the amplitude cap stops the fit once the mode grows past it
  EXPECT_LT(fit.used, 60u);
  EXPECT_FALSE(mode_growth_fit(std::vector<Snapshot>(snaps.begin(), snaps.begin() + 5), 1).reliable);
}

TEST(Analysis, DecayFitFlagsGrowingTail) {
  PeriodicGrid g(16);
  std::vector<Snapshot> snaps;
  for (int i = 0; i < 40; ++i)
    snaps.push_back({0.1 * i, i, Profile::from_function(g, [&](double x) { return 1e-8 * std::exp(0.2 * 0.1 * i) * std::cos(x); })});
  const auto fit = decay_rate_fit(snaps);
  EXPECT_FALSE(fit.reliable);
  EXPECT_EQ(fit.note, "non-monotone tail");
}

TEST(Analysis, StabilityConstant) {
  PeriodicGrid g(16);
  std::vector<Snapshot> snaps;
  // transient bump of 1.5x before decaying at rate 0.5
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.25 * i;
    const double a = (1.0 + 2.0 * t * std::exp(-t)) * std::exp(-0.5 * t);
    snaps.push_back({t, i, Profile::from_function(g, [&](double x) { return 3.0 + a * std::cos(2 * x); })});
  }
  double expect = 0.0;
  for (int i = 0; i <= 20; ++i) expect = std::max(expect, 1.0 + 2.0 * 0.25 * i * std::exp(-0.25 * i));
  EXPECT_NEAR(stability_constant(snaps, 0.5), expect, 1e-12);
  EXPECT_TRUE(std::isnan(stability_constant({}, 0.5)));
}

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "qsstokes/evolution/stepper.hpp"

using namespace qss;

namespace {

Profile random_profile(const PeriodicGrid& g, std::mt19937_64& rng, double amp) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> a(6), b(6);
  for (int k = 1; k < 6; ++k) {
    a[k] = amp * nd(rng) / (k * k);
    b[k] = amp * nd(rng) / (k * k);
  }
  const double c = nd(rng);
  return Profile::from_function(g, [&](double x) {
    double v = c;
    for (int k = 1; k < 6; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
}

}  // namespace

TEST(Phi, DerivativeMatchesFiniteDifference) {
  PeriodicGrid g(64);
  const Profile f = Profile::from_function(g, [](double x) { return 0.3 * std::cos(x) + 0.1 * std::sin(3 * x); });
  const Profile h = Profile::from_function(g, [](double x) { return std::sin(2 * x); });
  const double eps = 1e-6;
  const PhiPair p = phi_of(f + eps * h), m = phi_of(f - eps * h), d = dphi_of(f, h);
  EXPECT_LT(sup_norm((0.5 / eps) * (p.phi1 - m.phi1) - d.phi1), 1e-8);
  EXPECT_LT(sup_norm((0.5 / eps) * (p.phi2 - m.phi2) - d.phi2), 1e-8);
}

TEST(Forcing, NormalToInterfaceWithCurvatureLaw) {
  // omega^{-1} G = (Theta f - sigma kappa) nu
  PeriodicGrid g(128);
  const Profile f = Profile::from_function(g, [](double x) { return 0.4 * std::cos(x) - 0.2 * std::sin(2 * x); });
  const PhysParams prm = PhysParams::with_theta(1.0, 1.3, 0.7);
  const Forcing G = forcing_G(f, prm);
  const Geometry geo = geometry_quantities(f);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = geo.omega[i], lam = prm.theta() * f[i] - prm.sigma() * geo.curvature[i];
    EXPECT_NEAR(G.g1[i] / w, lam * geo.nu1[i], 1e-11);
    EXPECT_NEAR(G.g2[i] / w, lam * geo.nu2[i], 1e-11);
  }
}

TEST(FarField, TwoRoutesAgree) {
  PeriodicGrid g(128);
  const Profile f = Profile::from_function(g, [](double x) { return 0.3 * std::cos(x) + 0.1 * std::sin(2 * x) + 0.2; });
  const PhysParams prm = PhysParams::with_theta(0.7, 1.1, 2.0);
  const FarField ff = far_field_constants(f, prm);
  EXPECT_NEAR(ff.c1, ff.c1_forcing, 1e-13);
  EXPECT_NEAR(ff.c2, ff.c2_forcing, 1e-13);
  EXPECT_NEAR(ff.c2, -1.0 * 0.2, 1e-14);
}

TEST(Psi, MeanFreeAndConstantInvariant) {
  PeriodicGrid g(64);
  std::mt19937_64 rng(7);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 2.5);
  for (int trial = 0; trial < 5; ++trial) {
    const Profile f = random_profile(g, rng, 0.3);
    const Profile psi = eval_Psi(f, prm);
    EXPECT_LT(std::abs(psi.mean()), 1e-10);
    EXPECT_LT(sup_norm(eval_Psi(f + 0.37, prm) - psi), 1e-9);
  }
  EXPECT_LT(sup_norm(eval_Psi(Profile::constant(g, 0.8), prm)), 1e-10);
}

TEST(Psi, LinearizationIsTheSymbol) {
  PeriodicGrid g(64);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 3.0);
  for (int k : {1, 2, 7}) {
    const Profile c = Profile::from_function(g, [k](double x) { return std::cos(k * x); });
    const double eps = 1e-6;
    const Profile lin = (0.5 / eps) * (eval_Psi(eps * c, prm) - eval_Psi(-eps * c, prm));
    EXPECT_LT(sup_norm(lin - linear_symbol(prm, k) * c), 1e-8) << k;
  }
}

TEST(Psi, TranslationAndReflection) {
  PeriodicGrid g(64);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 1.0);
  auto fn = [](double x) { return 0.3 * std::cos(x) + 0.15 * std::sin(2 * x) - 0.05 * std::cos(3 * x); };
  const Profile f = Profile::from_function(g, fn);
  const Profile psi = eval_Psi(f, prm);
  const int sh = 9;
  const Profile fs = Profile::from_function(g, [&](double x) { return fn(x - g.node(sh)); });
  const Profile ps = eval_Psi(fs, prm);
  const Profile fr = Profile::from_function(g, [&](double x) { return fn(-x); });
  const Profile pr = eval_Psi(fr, prm);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_NEAR(ps[(i + sh) % 64], psi[i], 1e-13);
    EXPECT_NEAR(pr[(64 - i) % 64], psi[i], 1e-13);
  }
}

TEST(Stepper, Rk4AndImexAgreeOnShortRuns) {
  PeriodicGrid g(32);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 0.0);
  const Profile f0 = Profile::from_function(g, [](double x) { return 0.05 * std::cos(x) + 0.02 * std::sin(2 * x); });
  StepperConfig rk;
  rk.t_end = 0.5;
  StepperConfig im = rk;
  im.scheme = Scheme::imex_euler;
  im.dt = 1e-3;
  const auto a = integrate(EvolutionState(f0, prm), rk);
  const auto b = integrate(EvolutionState(f0, prm), im);
  EXPECT_NEAR(a.time, 0.5, 1e-12);
  EXPECT_LT(sup_norm(a.profile - b.profile), 5e-5);
  EXPECT_LT(std::abs(a.profile.mean() - f0.mean()), 1e-12);  // mean is conserved
}

TEST(Stepper, LinearModeDecaysAtSymbolRate) {
  PeriodicGrid g(32);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 0.0);
  const Profile f0 = Profile::from_function(g, [](double x) { return 1e-5 * std::cos(2 * x); });
  StepperConfig cfg;
  cfg.t_end = 2.0;
  const auto s = integrate(EvolutionState(f0, prm), cfg);
  EXPECT_NEAR(2 * std::abs(s.profile.coefficient(2)) / 1e-5, std::exp(2.0 * linear_symbol(prm, 2)), 1e-6);
}

TEST(Stepper, AdaptiveRespectsTolerance) {
  PeriodicGrid g(32);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 0.0);
  const Profile f0 = Profile::from_function(g, [](double x) { return 0.1 * std::cos(x); });
  StepperConfig cfg;
  cfg.t_end = 1.0;
  cfg.adapt = true;
  cfg.dt = 0.1;
  const auto a = integrate(EvolutionState(f0, prm), cfg);
  StepperConfig fine;
  fine.t_end = 1.0;
  fine.dt = 1.0 / 512;
  const auto b = integrate(EvolutionState(f0, prm), fine);
  EXPECT_LT(sup_norm(a.profile - b.profile), 1e-7);
}

TEST(Stepper, BlowUpCarriesLastGoodState) {
  PeriodicGrid g(16);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, -30.0);
  const Profile f0 = Profile::from_function(g, [](double x) { return 1e-6 * std::cos(x); });
  StepperConfig cfg;
  cfg.t_end = 100.0;
  cfg.dt = 0.01;
  cfg.blowup_factor = 10.0;
  try {
    integrate(EvolutionState(f0, prm), cfg);
    FAIL() << "expected blow-up";
  } catch (const BlowUpError& e) {
    EXPECT_LE(sup_norm(e.last_good().profile), 10.0 * 1e-6);
    EXPECT_GT(e.last_good().step_count, 0);
  }
}

TEST(Stepper, SnapshotsAreDeterministic) {
  PeriodicGrid g(32);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 1.0);
  const Profile f0 = Profile::from_function(g, [](double x) { return 0.1 * std::cos(x) + 0.05 * std::sin(3 * x); });
  StepperConfig cfg;
  cfg.t_end = 0.3;
  cfg.snapshot_stride = 4;
  auto run = [&] {
    std::vector<double> out;
    integrate(EvolutionState(f0, prm), cfg, [&](const Snapshot& s) {
      out.push_back(s.t);
      out.insert(out.end(), s.profile.values().begin(), s.profile.values().end());
    });
    return out;
  };
  const auto a = run(), b = run();
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(0, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)));
}

TEST(Stepper, RejectsBadConfig) {
  PeriodicGrid g(16);
  const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 0.0);
  StepperConfig cfg;
  cfg.snapshot_stride = 0;
  EXPECT_THROW(integrate(EvolutionState(Profile::zero(g), prm), cfg), InvalidArgument);
  EXPECT_THROW(parse_scheme("euler"), InvalidArgument);
  EXPECT_EQ(parse_scheme("imex-euler"), Scheme::imex_euler);
}

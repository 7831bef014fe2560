#include <gtest/gtest.h>

#include <cmath>

#include "qsstokes/core/params.hpp"
#include "qsstokes/core/spectral.hpp"

using namespace qss;

TEST(PeriodicGrid, RejectsOddOrSmall) {
  EXPECT_THROW(PeriodicGrid(7), InvalidArgument);
  EXPECT_THROW(PeriodicGrid(6), InvalidArgument);
  EXPECT_THROW(PeriodicGrid(9), InvalidArgument);
  EXPECT_NO_THROW(PeriodicGrid(8));
}

TEST(PeriodicGrid, Nodes) {
  PeriodicGrid g(16);
  EXPECT_DOUBLE_EQ(g.node(4), two_pi * 4 / 16);
  EXPECT_DOUBLE_EQ(g.shifted_node(0), pi / 16);
}

TEST(Profile, RejectsNonFinite) {
  PeriodicGrid g(8);
  std::vector<double> v(8, 0.0);
  v[3] = std::nan("");
  EXPECT_THROW(Profile(g, v), DomainError);
  EXPECT_THROW(Profile(g, std::vector<double>(6, 0.0)), InvalidArgument);
}

TEST(Spectral, CosineCoefficients) {
  PeriodicGrid g(8);
  const Profile f = Profile::from_function(g, [](double x) { return std::cos(x); });
  EXPECT_NEAR(f.coefficient(1).real(), 0.5, 1e-15);
  EXPECT_NEAR(f.coefficient(-1).real(), 0.5, 1e-15);
  for (int k : {0, 2, 3, 4}) EXPECT_NEAR(std::abs(f.coefficient(k)), 0.0, 1e-15);
}

TEST(Spectral, RoundTrip) {
  PeriodicGrid g(64);
  const Profile f = Profile::from_function(g, [](double x) { return std::exp(std::sin(x)) + 0.3 * std::cos(5 * x); });
  const Profile back = from_spectral(g, to_spectral(f));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(back[i], f[i], 1e-12);
}

TEST(Spectral, DerivativeOfSine) {
  PeriodicGrid g(32);
  const Profile f = Profile::from_function(g, [](double x) { return std::sin(3 * x); });
  const Profile d = spectral_derivative(f);
  const Profile d2 = spectral_derivative(f, 2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(d[i], 3 * std::cos(3 * g.node(i)), 1e-12);
    EXPECT_NEAR(d2[i], -9 * std::sin(3 * g.node(i)), 1e-12);
  }
}

TEST(Spectral, NyquistDroppedByDerivative) {
  PeriodicGrid g(8);
  const Profile f = Profile::from_function(g, [](double x) { return std::cos(4 * x); });
  EXPECT_LT(sup_norm(spectral_derivative(f)), 1e-14);
}

TEST(Spectral, HalfShiftIsExactForBandLimited) {
  PeriodicGrid g(32);
  auto fn = [](double x) { return 0.2 * std::cos(x) - 0.1 * std::sin(7 * x) + 0.4; };
  const Profile f = Profile::from_function(g, fn);
  const auto h = half_shift_samples(f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(h[i], fn(g.shifted_node(i)), 1e-14);
}

TEST(Spectral, InterpolantAndUpsample) {
  PeriodicGrid g(16);
  auto fn = [](double x) { return std::sin(x) + 0.5 * std::cos(3 * x) + 0.25 * std::cos(8 * x); };
  const Profile f = Profile::from_function(g, fn);
  const TrigInterpolant ti(f);
  double d = 0.0;
  EXPECT_NEAR(ti.eval(0.3, &d), fn(0.3), 1e-14);
  // derivative skips the Nyquist mode, like spectral_derivative
  EXPECT_NEAR(d, std::cos(0.3) - 1.5 * std::sin(0.9), 1e-13);
  const Profile up = upsample(f, 64);
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(up[i], fn(up.grid().node(i)), 1e-14);
}

TEST(Spectral, AntiderivativeIsMeanFree) {
  PeriodicGrid g(32);
  const Profile f = Profile::from_function(g, [](double x) { return std::cos(2 * x) + 1.0; });
  const Profile s = mean_free_antiderivative(f);
  EXPECT_NEAR(s.mean(), 0.0, 1e-15);
  for (std::size_t i = 0; i < 32; ++i) EXPECT_NEAR(s[i], 0.5 * std::sin(2 * g.node(i)), 1e-14);
}

TEST(Spectral, TailShare) {
  PeriodicGrid g(32);
  EXPECT_EQ(spectral_tail(Profile::constant(g, 2.0)), 0.0);
  EXPECT_NEAR(spectral_tail(Profile::from_function(g, [](double x) { return std::cos(3 * x); })), 0.0, 1e-28);
  // energy 1/4 in k = 2 and 1/4 * 0.25 in k = 12 (above N/4 = 8)
  const Profile p = Profile::from_function(g, [](double x) { return std::cos(2 * x) + 0.5 * std::sin(12 * x); });
  EXPECT_NEAR(spectral_tail(p), 0.25 / 1.25, 1e-14);
}

TEST(Geometry, FlatAndCurved) {
  PeriodicGrid g(64);
  const auto flat = geometry_quantities(Profile::zero(g));
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_DOUBLE_EQ(flat.omega[i], 1.0);
    EXPECT_DOUBLE_EQ(flat.nu2[i], 1.0);
    EXPECT_DOUBLE_EQ(flat.curvature[i], 0.0);
  }
  const Profile f = Profile::from_function(g, [](double x) { return 0.3 * std::sin(x); });
  const auto geo = geometry_quantities(f);
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = g.node(i), fp = 0.3 * std::cos(x), fpp = -0.3 * std::sin(x);
    const double w = std::sqrt(1 + fp * fp);
    EXPECT_NEAR(geo.omega[i], w, 1e-13);
    EXPECT_NEAR(geo.curvature[i], fpp / (w * w * w), 1e-13);
    EXPECT_NEAR(geo.nu1[i] * geo.tau1[i] + geo.nu2[i] * geo.tau2[i], 0.0, 1e-15);
  }
}

TEST(PhysParams, Validation) {
  EXPECT_THROW(PhysParams(0.0, 1.0, 0.0, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(PhysParams(1.0, -1.0, 0.0, 0.0, 0.0), InvalidArgument);
  EXPECT_THROW(PhysParams(1.0, 1.0, -1.0, 0.0, 0.0), InvalidArgument);
  const PhysParams p(1.0, 1.0, 2.0, 1.0, 2.5);
  EXPECT_DOUBLE_EQ(p.theta(), 3.0);
  EXPECT_DOUBLE_EQ(PhysParams::with_theta(1, 1, -0.5).theta(), -0.5);
}

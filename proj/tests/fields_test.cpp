#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qsstokes/fields/flow.hpp"

using namespace qss;

namespace {

Profile wavy(const PeriodicGrid& g) {
  return Profile::from_function(g, [](double x) { return 0.2 * std::cos(x) + 0.1 * std::sin(2 * x); });
}

}  // namespace

TEST(Stokeslet, ClosedFormMatchesComposedForm) {
  for (Vec2 x : {Vec2{0.7, 0.3}, Vec2{-2.0, -1.1}, Vec2{1.3, 4.0}, Vec2{0.01, -0.02}}) {
    const auto a = stokeslet_eval(x), b = stokeslet_eval_composed(x);
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(a.U[i][k], b.U[i][k], 1e-12 * (1 + std::abs(b.U[i][k])));
      EXPECT_NEAR(a.P[i], b.P[i], 1e-12 * (1 + std::abs(b.P[i])));
    }
  }
}

TEST(Stokeslet, LimitsAndSingularity) {
  const auto s = stokeslet_eval({pi, 0.0});
  EXPECT_NEAR(s.U[0][1], 0.0, 1e-15);
  EXPECT_NEAR(s.P[0], 0.0, 1e-15);
  EXPECT_NEAR(s.P[1], 0.0, 1e-15);
  EXPECT_THROW(stokeslet_eval({0.0, 0.0}), DomainError);
  EXPECT_THROW(stokeslet_eval({two_pi, 0.0}), DomainError);
}

TEST(Stokeslet, SolvesStokesAwayFromPole) {
  // Delta U^k - grad P^k = 0 and div U^k = 0, checked by 4th-order differences
  const double h = 1e-3;
  const Vec2 x{0.9, 0.6};
  auto U = [](Vec2 y, int i, int k) { return stokeslet_eval(y).U[i][k]; };
  auto P = [](Vec2 y, int k) { return stokeslet_eval(y).P[k]; };
  auto d1 = [&](auto fn, int dir) {
    auto at = [&](double t) { Vec2 y = x; y[dir] += t; return fn(y); };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  auto d2 = [&](auto fn, int dir) {
    auto at = [&](double t) { Vec2 y = x; y[dir] += t; return fn(y); };
    return (-at(2 * h) + 16 * at(h) - 30 * at(0) + 16 * at(-h) - at(-2 * h)) / (12 * h * h);
  };
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      auto ui = [&](Vec2 y) { return U(y, i, k); };
      auto pk = [&](Vec2 y) { return P(y, k); };
      EXPECT_NEAR(d2(ui, 0) + d2(ui, 1) - d1(pk, i), 0.0, 1e-6);
    }
    EXPECT_NEAR(d1([&](Vec2 y) { return U(y, 0, k); }, 0) + d1([&](Vec2 y) { return U(y, 1, k); }, 1), 0.0, 1e-8);
  }
}

TEST(Layer, KernelBranchesAgree) {
  // the two stable forms meet at |r2| = 20
  for (double r1 : {0.3, 2.0, -1.0}) {
    const auto a = z_kernels(r1, 20.0), b = z_kernels(r1, std::nextafter(20.0, 21.0));
    for (int z = 0; z < 7; ++z) EXPECT_NEAR(a[z], b[z], 1e-12 * (1 + std::abs(a[z])));
  }
}

TEST(Layer, GradientIdentities) {
  // grad Z0 = (Z1, Z2), grad Z5 = (-Z3, Z1 - 2Z4), grad Z6 = (-2Z4, Z2 + Z3)
  PeriodicGrid g(64);
  const Profile f = wavy(g);
  const Profile phi = Profile::from_function(g, [](double x) { return 1.0 + 0.5 * std::sin(x); });
  FieldOptions opt;
  opt.method = FieldQuadrature::adaptive;
  const LayerPotentials lp(f, {phi}, opt);
  const Vec2 x{1.1, 0.9};
  const double h = 1e-3;
  auto z = [&](double dx, double dy) { return lp.eval({x[0] + dx, x[1] + dy})[0]; };
  auto d = [&](int k, int dir) {
    auto at = [&](double t) { return dir == 0 ? z(t, 0)[k] : z(0, t)[k]; };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };
  const auto c = z(0, 0);
  EXPECT_NEAR(d(0, 0), c[1], 1e-9);
  EXPECT_NEAR(d(0, 1), c[2], 1e-9);
  EXPECT_NEAR(d(5, 0), -c[3], 1e-9);
  EXPECT_NEAR(d(5, 1), c[1] - 2 * c[4], 1e-9);
  EXPECT_NEAR(d(6, 0), -2 * c[4], 1e-9);
  EXPECT_NEAR(d(6, 1), c[2] + c[3], 1e-9);
}

TEST(Layer, AdaptiveMatchesTrapezoidAwayFromInterface) {
  PeriodicGrid g(64);
  const Profile f = wavy(g), phi = Profile::from_function(g, [](double x) { return std::cos(x); });
  FieldOptions ad;
  ad.method = FieldQuadrature::adaptive;
  const LayerPotentials tr(f, {phi}), adp(f, {phi}, ad);
  // well away, and just outside the default collar on both sides
  const double c = tr.options().collar;
  for (Vec2 x : {Vec2{0.4, 1.3}, Vec2{g.node(20), f[20] + 1.5 * c}, Vec2{g.node(40), f[40] - 1.5 * c}}) {
    ASSERT_GE(tr.proximity(x).distance, c);
    const auto a = tr.eval(x)[0], b = adp.eval(x)[0];
    for (int z = 0; z < 7; ++z) EXPECT_NEAR(a[z], b[z], 1e-10 * std::max(1.0, std::abs(b[z]))) << z;
  }
}

TEST(Layer, CollarIsEnforced) {
  PeriodicGrid g(64);
  const Profile f = wavy(g);
  const Profile one = Profile::constant(g, 1.0);
  try {
    eval_Z(1, f, one, {0.0, f[0] + 0.05});
    FAIL() << "expected ProximityError";
  } catch (const ProximityError& e) {
    EXPECT_LT(e.distance(), e.collar());
  }
  EXPECT_NO_THROW(eval_Z(1, f, one, {0.0, f[0] + 2.0}));
  EXPECT_THROW(eval_Z(7, f, one, {0.0, 3.0}), InvalidArgument);
}

TEST(Flow, ZFormMatchesStokesletForm) {
  PeriodicGrid g(64);
  const FlowField flow(wavy(g), PhysParams::with_theta(0.8, 1.2, 1.5));
  for (Vec2 x : {Vec2{0.3, 1.5}, Vec2{2.0, -1.2}, Vec2{-3.0, 0.9}}) {
    const auto a = flow.sample(x), b = flow.sample_by_stokeslet(x);
    EXPECT_NEAR(a.v[0], b.v[0], 1e-13);
    EXPECT_NEAR(a.v[1], b.v[1], 1e-13);
    EXPECT_NEAR(a.q, b.q, 1e-13);
  }
}

TEST(Flow, TraceVariantsAndKinematicCondition) {
  PeriodicGrid g(64);
  const Profile f = Profile::from_function(g, [](double x) { return 0.1 * std::cos(x) - 0.05 * std::sin(3 * x); });
  for (double th : {0.0, 1.0, -0.5}) {
    const PhysParams p = PhysParams::with_theta(1.0, 1.0, th);
    const auto a = *trace_velocity(f, p, TraceVariant::direct_g);
    const auto b = *trace_velocity(f, p, TraceVariant::parts_z);
    EXPECT_LT(sup_norm(a.v1 - b.v1), 1e-12);
    EXPECT_LT(sup_norm(a.v2 - b.v2), 1e-12);
    // Psi = v2 - f' v1 on the interface, v = v_G + (0, <G2> ln4 / 4mu)
    const double off = forcing_G(f, p).g2.mean() * std::log(4.0) / (4.0 * p.mu());
    EXPECT_LT(sup_norm((a.v2 + off) - spectral_derivative(f) * a.v1 - eval_Psi(f, p)), 1e-12);
  }
}

TEST(Flow, PartsVariantNeedsMeanFreeProfile) {
  PeriodicGrid g(32);
  const Profile f = Profile::from_function(g, [](double x) { return 0.1 * std::cos(x) + 0.3; });
  EXPECT_FALSE(trace_velocity(f, PhysParams::with_theta(1, 1, 1.0), TraceVariant::parts_z).has_value());
  EXPECT_TRUE(trace_velocity(f, PhysParams::with_theta(1, 1, 0.0), TraceVariant::parts_z).has_value());
}

TEST(Flow, FieldTracesMatchInterfaceTrace) {
  // v is continuous, so approaching from either side recovers the interface trace
  PeriodicGrid g(64);
  const Profile f = wavy(g);
  const PhysParams p = PhysParams::with_theta(1.0, 1.0, 1.0);
  FieldOptions fo;
  fo.method = FieldQuadrature::adaptive;
  const FlowField flow(f, p, fo);
  const auto tr = *trace_velocity(f, p, TraceVariant::direct_g);
  const double off = forcing_G(f, p).g2.mean() * std::log(4.0) / (4.0 * p.mu());
  for (std::size_t i : {0u, 13u, 40u}) {
    for (double sgn : {1.0, -1.0}) {
      const Vec2 v = flow.velocity({g.node(i), f[i] + sgn * 1e-7});
      EXPECT_NEAR(v[0], tr.v1[i], 1e-6);
      EXPECT_NEAR(v[1], tr.v2[i] + off, 1e-6);
    }
  }
}

TEST(Flow, FarField) {
  PeriodicGrid g(64);
  const Profile f = wavy(g);
  const PhysParams p = PhysParams::with_theta(1.0, 1.0, 1.0);
  const FlowField flow(f, p);
  const FarField ff = far_field_constants(f, p);
  for (double x2 : {20.0, -20.0}) {
    const double sgn = x2 > 0 ? 1.0 : -1.0;
    const auto s = flow.sample({0.7, x2});
    EXPECT_NEAR(s.v[0], sgn * ff.c1, 1e-6);
    EXPECT_NEAR(s.v[1], 0.0, 1e-6);
    EXPECT_NEAR(s.q, sgn * ff.c2_forcing, 1e-6);
    EXPECT_EQ(s.side, x2 > 0 ? Side::plus : Side::minus);
  }
}

TEST(Flow, JumpRelationsConverge) {
  PeriodicGrid g(64);
  JumpCheckOptions jo;
  jo.sample_points = 4;
  const auto rep = interface_jump_checks(wavy(g), PhysParams::with_theta(1.0, 1.0, 1.0), jo);
  const std::size_t last = rep.eps.size() - 1;
  for (int n = 0; n < 4; ++n) {
    EXPECT_LT(rep.z_residual[n][last], 1e-4);
    EXPECT_NEAR(rep.z_order[n], 1.0, 0.2);  // first order in eps
  }
  EXPECT_LT(rep.pressure_jump_residual[last], 1e-4);
  EXPECT_LT(rep.stress_residual[last], 1e-4);
  EXPECT_LT(rep.traction_residual[last], 1e-4);
  EXPECT_LT(rep.velocity_jump[last], 1e-4);
}

TEST(Flow, GradientMatchesDifferences) {
  PeriodicGrid g(64);
  const FlowField flow(wavy(g), PhysParams::with_theta(1.0, 1.0, 0.5));
  const Vec2 x{2.2, 1.0};
  const double h = 1e-3;
  const Mat2 G = flow.velocity_gradient(x);
  for (int j = 0; j < 2; ++j) {
    auto at = [&](double t) { Vec2 y = x; y[j] += t; return flow.velocity(y); };
    const auto a = at(2 * h), b = at(h), c = at(-h), d = at(-2 * h);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(G[i][j], (-a[i] + 8 * b[i] - 8 * c[i] + d[i]) / (12 * h), 1e-9);
  }
  EXPECT_NEAR(G[0][0] + G[1][1], 0.0, 1e-14);
}

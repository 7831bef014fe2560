#pragma once

// Named invariant checks shared by the command-line verify suite and the acceptance runner.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qsstokes/analysis/rates.hpp"
#include "qsstokes/analysis/spectrum.hpp"
#include "qsstokes/evolution/stepper.hpp"
#include "qsstokes/fields/flow.hpp"
#include "qsstokes/io/formats.hpp"
#include "qsstokes/ops/frechet.hpp"

namespace qss::verify {

enum class Level { quick, full };

inline Level parse_level(const std::string& s) {
  if (s == "quick") return Level::quick;
  if (s == "full") return Level::full;
  throw InvalidArgument("unknown level '" + s + "' (quick or full)");
}

inline std::string to_string(Level l) { return l == Level::quick ? "quick" : "full"; }

struct Options {
  Level level = Level::full;
  std::uint64_t seed = 1;
  double fault = 0.0;  // relative corruption of one quadrature weight of B (test hook)
};

struct CheckResult {
  std::string name;
  int criterion = 0;  // acceptance criterion this check belongs to
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline double rel_err(const Profile& a, const Profile& ref) {
  return sup_norm(a - ref) / std::max(sup_norm(ref), 1e-300);
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

inline Profile test_profile(const PeriodicGrid& g) {
  return Profile::from_function(g, [](double x) { return 0.3 * std::cos(x) + 0.1 * std::sin(2 * x); });
}

inline Profile test_density(const PeriodicGrid& g) {
  return Profile::from_function(g, [](double x) { return std::exp(std::sin(x)) - 0.4 * std::cos(3 * x); });
}

/// Smooth random profile: modes 1..7 with normal coefficients damped like 1/k^2, plus a random constant.
inline Profile random_profile(const PeriodicGrid& g, std::mt19937_64& rng, double amp) {
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> a(8), b(8);
  for (int k = 1; k < 8; ++k) {
    a[k] = amp * nd(rng) / (k * k);
    b[k] = amp * nd(rng) / (k * k);
  }
  const double c = nd(rng);
  return Profile::from_function(g, [&](double x) {
    double v = c;
    for (int k = 1; k < 8; ++k) v += a[k] * std::cos(k * x) + b[k] * std::sin(k * x);
    return v;
  });
}

template <class F>
CheckResult timed(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void budget(CheckResult& r, double limit) {
  r.detail += "; " + fmt(r.seconds) + " s (limit " + fmt(limit) + " s)";
  if (r.seconds > limit) r.passed = false;
}

}  // namespace detail

inline CheckResult check_spectrum(const Options& o) {
  const bool full = o.level == Level::full;
  CheckResult r = detail::timed([&] {
    const PeriodicGrid g(full ? 256 : 64);
    const int kmax = full ? 32 : 16;
    double err = 0.0, leak = 0.0;
    for (double th : {0.0, 3.0, -0.5}) {
      const auto rep = numeric_jacobian_at_zero(PhysParams::with_theta(1.0, 1.0, th), g, kmax);
      for (const auto& e : rep.modes) {
        err = std::max({err, e.rel_error, std::abs(e.numeric_sin - e.analytic) / std::abs(e.analytic)});
        leak = std::max(leak, e.leakage);
      }
    }
    CheckResult c{"spectrum_match", 1, err < 1e-6 && leak < 1e-8, err, 1e-6, "", 0.0};
    c.detail = "N = " + std::to_string(g.size()) + ", k <= " + std::to_string(kmax) + ", leakage " +
               detail::fmt(leak) + " (limit 1e-08)";
    return c;
  });
  if (full) detail::budget(r, 60.0);
  return r;
}

/// B = A + C for the B_{n,m}^{0,q} family, with B on its own rule and A, C on theirs.
inline CheckResult check_identity_B_eq_A_plus_C(const Options& o) {
  const bool full = o.level == Level::full;
  CheckResult r = detail::timed([&] {
    const PeriodicGrid g(full ? 256 : 64);
    const Profile f = detail::test_profile(g), phi = detail::test_density(g);
    QuadratureRule brule = QuadratureRule::for_B(g);
    if (o.fault != 0.0) brule = brule.corrupted(o.fault);
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n)
      for (int m = 1; m <= 3; ++m)
        for (int q : {0, 1}) {
          const auto s = OperatorSpec::diagonal(n, m, 0, q, f);
          const Profile rhs = eval_A(s, 1, phi) + eval_C(OperatorSpec::diagonal(n + q, m, 0, 0, f), phi);
          worst = std::max(worst, sup_norm(eval_B(s, phi, brule) - rhs));
        }
    return CheckResult{"identity_B_eq_A_plus_C", 2, worst < 1e-9, worst, 1e-9,
                       "(n, m) in {0..4} x {1..3}, q in {0, 1}, N = " + std::to_string(g.size()), 0.0};
  });
  if (full) detail::budget(r, 30.0);
  return r;
}

inline CheckResult check_recursion_C0(const Options& o) {
  const bool full = o.level == Level::full;
  CheckResult r = detail::timed([&] {
    const PeriodicGrid g(full ? 256 : 64);
    const Profile f = detail::test_profile(g), phi = detail::test_density(g);
    double worst = 0.0;
    for (int n = 0; n <= 4; ++n)
      for (int m = 1; m <= 3; ++m) {
        const Profile l = eval_C(OperatorSpec::diagonal(n, m, 0, 0, f), phi) +
                          eval_C(OperatorSpec::diagonal(n + 2, m, 0, 0, f), phi);
        worst = std::max(worst, sup_norm(l - eval_C(OperatorSpec::diagonal(n, m - 1, 0, 0, f), phi)));
      }
    return CheckResult{"recursion_C0", 2, worst < 1e-9, worst, 1e-9,
                       "C_{n,m} + C_{n+2,m} = C_{n,m-1}, N = " + std::to_string(g.size()), 0.0};
  });
  if (full) detail::budget(r, 30.0);
  return r;
}

inline CheckResult check_frechet(const Options& o) {
  const bool full = o.level == Level::full;
  CheckResult r = detail::timed([&] {
    const PeriodicGrid g(full ? 128 : 64);
    const Profile f0 = detail::test_profile(g), phi = detail::test_density(g);
    const Profile h = Profile::from_function(g, [](double x) { return 0.5 * std::sin(x) - 0.3 * std::cos(2 * x); });
    const double eps = 1e-5;
    struct Idx { int n, m, p, q; };
    double worst = 0.0;
    for (Idx t : {Idx{0, 1, 0, 0}, Idx{1, 1, 2, 0}, Idx{2, 2, 2, 1}, Idx{0, 2, 0, 1}, Idx{3, 2, 4, 1}}) {
      MultilinearB base{t.n, t.m, t.p, t.q, f0, {}};
      MultilinearB plus = base, minus = base;
      plus.f = f0 + eps * h;
      minus.f = f0 - eps * h;
      const Profile fd = (0.5 / eps) * (plus.apply(phi) - minus.apply(phi));
      worst = std::max(worst, detail::rel_err(frechet_B(base, h).apply(phi), fd));
    }
    const Profile fd0 = (0.5 / eps) * (eval_B0(f0 + eps * h, phi) - eval_B0(f0 - eps * h, phi));
    const double e0 = detail::rel_err(frechet_B0(f0, h).apply(phi), fd0);
    CheckResult c{"frechet_derivatives", 3, worst < 1e-6 && e0 < 1e-6, std::max(worst, e0), 1e-6, "", 0.0};
    c.detail = "five B index sets " + detail::fmt(worst) + ", B0 " + detail::fmt(e0);
    return c;
  });
  if (full) detail::budget(r, 30.0);
  return r;
}

inline CheckResult check_psi_conservation(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 128 : 64);
    std::mt19937_64 rng(o.seed);
    const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 1.5);
    double mean = 0.0, shift = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Profile f = detail::random_profile(g, rng, 0.3);
      const Profile psi = eval_Psi(f, prm);
      mean = std::max(mean, std::abs(psi.mean()));
      shift = std::max(shift, sup_norm(eval_Psi(f + 0.37, prm) - psi));
    }
    const double cst = sup_norm(eval_Psi(Profile::constant(g, 0.8), prm));
    CheckResult c{"psi_conservation", 4, mean < 1e-10 && cst < 1e-10 && shift < 1e-9, mean, 1e-10, "", 0.0};
    c.detail = "20 random profiles: |<Psi>| " + detail::fmt(mean) + ", |Psi(const)| " + detail::fmt(cst) +
               " (1e-10), |Psi(f + c) - Psi(f)| " + detail::fmt(shift) + " (1e-09)";
    return c;
  });
}

inline CheckResult check_decay_rate(const Options& o) {
  const bool full = o.level == Level::full;
  CheckResult r = detail::timed([&] {
    const PeriodicGrid g(full ? 64 : 32);
    const PhysParams prm = PhysParams::with_theta(1.0, 1.0, 0.0);
    const Profile f0 = Profile::from_function(g, [](double x) { return 1e-4 * std::cos(x); });
    StepperConfig cfg;
    cfg.t_end = full ? 8.0 : 4.0;
    std::vector<Snapshot> snaps;
    integrate(EvolutionState(f0, prm), cfg, [&](const Snapshot& s) { snaps.push_back(s); });
    const RateFit fit = decay_rate_fit(snaps);
    const double err = std::abs(fit.rate - 0.25) / 0.25;
    CheckResult c{"nonlinear_decay_rate", 5, fit.reliable && err < 0.02, err, 0.02, "", 0.0};
    c.detail = "fitted rate " + detail::fmt(fit.rate) + " vs 0.25 over " + std::to_string(fit.used) + " snapshots" +
               (fit.note.empty() ? "" : " (" + fit.note + ")");
    return c;
  });
  if (full) detail::budget(r, 60.0);
  return r;
}

inline CheckResult check_instability(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 64 : 32);
    const PhysParams prm = PhysParams::with_theta(1.0, 1.0, -2.0);
    const Profile f0 = Profile::from_function(g, [](double x) { return 1e-8 * std::cos(x); });
    StepperConfig cfg;
    cfg.t_end = full ? 20.0 : 8.0;
    cfg.snapshot_stride = 8;
    cfg.blowup_factor = 1e8;
    std::vector<Snapshot> snaps;
    integrate(EvolutionState(f0, prm), cfg, [&](const Snapshot& s) { snaps.push_back(s); });
    const RateFit fit = mode_growth_fit(snaps, 1, 1e-3);
    const double err = std::abs(fit.rate - 0.25) / 0.25;
    CheckResult c{"instability_growth_rate", 6, fit.reliable && err < 0.05, err, 0.05, "", 0.0};
    c.detail = "mode-1 growth " + detail::fmt(fit.rate) + " vs 0.25 over " + std::to_string(fit.used) + " snapshots";
    return c;
  });
}

inline CheckResult check_trace_equivalence(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 128 : 64);
    const Profile f = Profile::from_function(g, [](double x) { return 0.1 * std::cos(x); });
    double worst = 0.0;
    bool ok = true;
    for (auto [s, th] : {std::pair{1.0, 0.0}, std::pair{1.0, 1.0}}) {
      const PhysParams prm = PhysParams::with_theta(1.0, s, th);
      const auto a = trace_velocity(f, prm, TraceVariant::direct_g);
      const auto b = trace_velocity(f, prm, TraceVariant::parts_z);
      if (!a || !b) {
        ok = false;
        continue;
      }
      worst = std::max({worst, sup_norm(a->v1 - b->v1), sup_norm(a->v2 - b->v2)});
    }
    return CheckResult{"trace_equivalence", 7, ok && worst < 1e-8, worst, 1e-8,
                       "f = 0.1 cos x, (sigma, Theta) in {(1, 0), (1, 1)}", 0.0};
  });
}

inline CheckResult check_jump_relations(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 64 : 32);
    JumpCheckOptions jo;
    jo.sample_points = full ? 8 : 4;
    const auto rep = interface_jump_checks(detail::test_profile(g), PhysParams::with_theta(1.0, 1.0, 1.0), jo);
    const std::size_t last = rep.eps.size() - 1;
    double z = 0.0, order = 1e300;
    bool decreasing = true;
    for (int n = 0; n < 4; ++n) {
      z = std::max(z, rep.z_residual[n][last]);
      order = std::min(order, rep.z_order[n]);
      for (std::size_t i = 1; i <= last; ++i)
        decreasing = decreasing && rep.z_residual[n][i] < rep.z_residual[n][i - 1];
    }
    const double qj = rep.pressure_jump_residual[last];
    for (std::size_t i = 1; i <= last; ++i)
      decreasing = decreasing && rep.pressure_jump_residual[i] < rep.pressure_jump_residual[i - 1];
    const double worst = std::max(z, qj);
    CheckResult c{"jump_relations", 8, decreasing && worst < 1e-4, worst, 1e-4, "", 0.0};
    c.detail = "at eps = 1e-4 h: Z1..Z4 " + detail::fmt(z) + ", [q] " + detail::fmt(qj) + ", observed order " +
               detail::fmt(order) + (decreasing ? "" : ", residuals not decreasing");
    return c;
  });
}

inline CheckResult check_far_field(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 64 : 32);
    const FlowField flow(detail::test_profile(g), PhysParams::with_theta(1.0, 1.0, 1.0));
    const FarFieldCheck ff = far_field_check(flow, 20.0, full ? 16 : 4);
    const double worst = std::max({ff.v1_residual, ff.v2_residual, ff.q_residual});
    CheckResult c{"far_field", 9, worst < 1e-6, worst, 1e-6, "", 0.0};
    c.detail = "x2 = +-20: v1 " + detail::fmt(ff.v1_residual) + ", v2 " + detail::fmt(ff.v2_residual) + ", q " +
               detail::fmt(ff.q_residual);
    return c;
  });
}

inline CheckResult check_stokes_residuals(const Options& o) {
  const bool full = o.level == Level::full;
  return detail::timed([&] {
    const PeriodicGrid g(full ? 64 : 32);
    const FlowField flow(detail::test_profile(g), PhysParams::with_theta(1.0, 1.0, 1.0));
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> ux(0.0, two_pi), uy(-3.0, 3.0);
    const int want = full ? 50 : 10;
    StokesResidual worst;
    for (int got = 0; got < want;) {
      const Vec2 x{ux(rng), uy(rng)};
      if (flow.layer().proximity(x).distance < 0.5) continue;
      const auto s = stokes_residual(flow, x, 1e-3);
      worst.momentum = std::max(worst.momentum, s.momentum);
      worst.divergence = std::max(worst.divergence, s.divergence);
      worst.pressure_laplacian = std::max(worst.pressure_laplacian, s.pressure_laplacian);
      ++got;
    }
    const double w = std::max({worst.momentum, worst.divergence, worst.pressure_laplacian});
    CheckResult c{"stokes_residuals", 10, w < 1e-5, w, 1e-5, "", 0.0};
    c.detail = std::to_string(want) + " points: momentum " + detail::fmt(worst.momentum) + ", div " +
               detail::fmt(worst.divergence) + ", Lap q " + detail::fmt(worst.pressure_laplacian);
    return c;
  });
}

/// Serialized snapshot stream of a short nonlinear run.
inline std::string snapshot_stream(const Options& o) {
  const PeriodicGrid g(o.level == Level::full ? 64 : 32);
  std::mt19937_64 rng(o.seed);
  const Profile f0 = detail::random_profile(g, rng, 0.1);
  StepperConfig cfg;
  cfg.t_end = o.level == Level::full ? 0.5 : 0.1;
  cfg.snapshot_stride = 4;
  std::ostringstream os;
  integrate(EvolutionState(f0, PhysParams::with_theta(1.0, 1.0, 1.0)), cfg,
            [&](const Snapshot& s) { io::write_snapshot(os, s); });
  return os.str();
}

inline CheckResult check_determinism(const Options& o) {
  return detail::timed([&] {
    const std::string a = snapshot_stream(o), b = snapshot_stream(o);
    return CheckResult{"determinism", 11, a == b && !a.empty(), a == b ? 0.0 : 1.0, 0.0,
                       std::to_string(a.size()) + " bytes of snapshots, rerun " +
                           (a == b ? "identical" : "differs"),
                       0.0};
  });
}

using Check = std::function<CheckResult(const Options&)>;

struct NamedCheck {
  std::string name;
  int criterion;
  Check run;
};

inline std::vector<NamedCheck> all_checks() {
  return {{"spectrum_match", 1, check_spectrum},
          {"identity_B_eq_A_plus_C", 2, check_identity_B_eq_A_plus_C},
          {"recursion_C0", 2, check_recursion_C0},
          {"frechet_derivatives", 3, check_frechet},
          {"psi_conservation", 4, check_psi_conservation},
          {"nonlinear_decay_rate", 5, check_decay_rate},
          {"instability_growth_rate", 6, check_instability},
          {"trace_equivalence", 7, check_trace_equivalence},
          {"jump_relations", 8, check_jump_relations},
          {"far_field", 9, check_far_field},
          {"stokes_residuals", 10, check_stokes_residuals},
          {"determinism", 11, check_determinism}};
}

/// Run every check; on_result is called as each one finishes. A check that throws fails.
inline std::vector<CheckResult> run_suite(const Options& o,
                                          const std::function<void(const CheckResult&)>& on_result = {}) {
  std::vector<CheckResult> out;
  for (const auto& c : all_checks()) {
    CheckResult r;
    try {
      r = c.run(o);
    } catch (const std::exception& e) {
      r = CheckResult{};
      r.detail = std::string("threw: ") + e.what();
    }
    r.name = c.name;
    r.criterion = c.criterion;
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string format_result(const CheckResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS " : "FAIL ") << r.name << "  value " << detail::fmt(r.value) << " (threshold "
     << detail::fmt(r.threshold) << ")  " << r.detail;
  return os.str();
}

}  // namespace qss::verify

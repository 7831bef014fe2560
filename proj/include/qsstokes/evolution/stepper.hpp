#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>

#include "qsstokes/evolution/psi.hpp"

namespace qss {

enum class Scheme { imex_euler, rk4 };

inline std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "imex-euler"; }

inline Scheme parse_scheme(const std::string& s) {
  if (s == "rk4") return Scheme::rk4;
  if (s == "imex-euler" || s == "imex") return Scheme::imex_euler;
  throw InvalidArgument("unknown scheme '" + s + "' (expected rk4 or imex-euler)");
}

struct StepperConfig {
  Scheme scheme = Scheme::rk4;
  double dt = 0.0;              // 0 -> default_dt
  double t_end = 1.0;
  long snapshot_stride = 1;
  bool adapt = false;           // step-doubling error control
  double tol = 1e-8;
  double blowup_factor = 1e3;   // ||f||_inf > factor * ||f0||_inf aborts
};

inline double default_dt(Scheme s, std::size_t n) {
  return s == Scheme::rk4 ? 0.5 / static_cast<double>(n) : 2.0 / static_cast<double>(n);
}

struct EvolutionState {
  double time = 0.0;
  Profile profile;
  PhysParams params;
  long step_count = 0;
  double initial_sup = 0.0;  // reference for blow-up detection

  EvolutionState(Profile f, PhysParams p, double t = 0.0)
      : time(t), profile(std::move(f)), params(p), initial_sup(sup_norm(profile)) {}
};

/// Integration aborted; carries the last state that passed the checks.
class BlowUpError : public DomainError {
 public:
  BlowUpError(const std::string& what, EvolutionState last_good)
      : DomainError(what), last_good_(std::move(last_good)) {}
  const EvolutionState& last_good() const noexcept { return last_good_; }

 private:
  EvolutionState last_good_;
};

/// Linear part of the operator at f = 0: lambda_k = -(sigma k^2 + Theta)/(4 mu |k|), lambda_0 = 0.
inline double linear_symbol(const PhysParams& p, int k) {
  if (k == 0) return 0.0;
  const double ak = std::abs(static_cast<double>(k));
  return -(p.sigma() * ak * ak + p.theta()) / (4.0 * p.mu() * ak);
}

namespace detail {

inline Profile axpy(const Profile& x, double a, const Profile& y) {
  return pointwise(x, y, [a](double u, double v) { return u + a * v; });
}

inline Profile rk4_step(const Profile& f, const PhysParams& p, double dt) {
  const Profile k1 = eval_Psi(f, p);
  const Profile k2 = eval_Psi(axpy(f, 0.5 * dt, k1), p);
  const Profile k3 = eval_Psi(axpy(f, 0.5 * dt, k2), p);
  const Profile k4 = eval_Psi(axpy(f, dt, k3), p);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = f[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return Profile(f.grid(), std::move(out));
}

/// (I - dt L) f_new = f + dt (Psi(f) - L f)
inline Profile imex_step(const Profile& f, const PhysParams& p, double dt) {
  const Profile psi = eval_Psi(f, p);
  const Profile lf = apply_multiplier(f, [&](int k) { return std::complex<double>(linear_symbol(p, k)); });
  const Profile rhs = pointwise(f, psi - lf, [dt](double u, double v) { return u + dt * v; });
  return apply_multiplier(rhs, [&](int k) { return std::complex<double>(1.0 / (1.0 - dt * linear_symbol(p, k))); });
}

inline Profile advance(const Profile& f, const PhysParams& p, Scheme s, double dt) {
  return s == Scheme::rk4 ? rk4_step(f, p, dt) : imex_step(f, p, dt);
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline void check_state(const EvolutionState& prev, const Profile& next, double factor) {
  const double sup = sup_norm(next);
  const double limit = factor * prev.initial_sup;
  if (!std::isfinite(sup)) throw BlowUpError("non-finite profile after t = " + num(prev.time), prev);
  if (prev.initial_sup > 0.0 && sup > limit)
    throw BlowUpError("sup|f| = " + num(sup) + " exceeds " + num(factor) + " * sup|f0| = " + num(limit) +
                          " after t = " + num(prev.time),
                      prev);
}

inline Profile checked_advance(const EvolutionState& s, const StepperConfig& cfg, double dt) {
  try {
    return advance(s.profile, s.params, cfg.scheme, dt);
  } catch (const DomainError& e) {  // non-finite intermediate
    throw BlowUpError(std::string("step failed: ") + e.what(), s);
  }
}

}  // namespace detail

/// One fixed step of size dt (or cfg.dt / default).
inline EvolutionState step(const EvolutionState& s, const StepperConfig& cfg, double dt = 0.0) {
  if (dt <= 0.0) dt = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.scheme, s.profile.size());
  Profile next = detail::checked_advance(s, cfg, dt);
  detail::check_state(s, next, cfg.blowup_factor);
  EvolutionState out = s;
  out.profile = std::move(next);
  out.time = s.time + dt;
  out.step_count = s.step_count + 1;
  return out;
}

struct Snapshot {
  double t;
  long step;
  Profile profile;
  double mean() const { return profile.mean(); }
  double linf() const { return sup_norm(profile); }
  double l2() const { return l2_norm(profile); }
  double tail() const { return spectral_tail(profile); }
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Integrate to cfg.t_end, emitting the initial state, every snapshot_stride-th step and the final state.
inline EvolutionState integrate(EvolutionState s, const StepperConfig& cfg, const SnapshotSink& sink = {}) {
  if (cfg.snapshot_stride < 1) throw InvalidArgument("integrate: snapshot_stride must be >= 1");
  if (!(cfg.t_end >= s.time)) throw InvalidArgument("integrate: t_end before start time");
  if (cfg.adapt && !(cfg.tol > 0.0)) throw InvalidArgument("integrate: tol must be > 0");
  double dt = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.scheme, s.profile.size());
  const double eps_t = 1e-12 * std::max(1.0, cfg.t_end);
  long last_emitted = -1;
  auto emit = [&](const EvolutionState& st) {
    if (sink && st.step_count != last_emitted) {
      sink(Snapshot{st.time, st.step_count, st.profile});
      last_emitted = st.step_count;
    }
  };
  emit(s);
  while (s.time < cfg.t_end - eps_t) {
    double h = std::min(dt, cfg.t_end - s.time);
    if (!cfg.adapt) {
      s = step(s, cfg, h);
    } else {
      // step doubling: one step of h against two of h/2
      const int order = cfg.scheme == Scheme::rk4 ? 4 : 1;
      for (int tries = 0;; ++tries) {
        const EvolutionState big = step(s, cfg, h);
        const EvolutionState half = step(step(s, cfg, 0.5 * h), cfg, 0.5 * h);
        const double err = sup_norm(big.profile - half.profile) / std::max(1.0, sup_norm(s.profile));
        const double scale = err > 0.0 ? 0.9 * std::pow(cfg.tol / err, 1.0 / (order + 1)) : 2.0;
        if (err <= cfg.tol || tries > 30) {
          s = half;
          s.step_count = big.step_count;
          dt = h * std::clamp(scale, 0.2, 2.0);
          break;
        }
        h *= std::clamp(scale, 0.1, 0.9);
      }
    }
    if (s.time >= cfg.t_end - eps_t) s.time = cfg.t_end;  // absorb rounding in the accumulated time
    if (s.step_count % cfg.snapshot_stride == 0) emit(s);
  }
  emit(s);
  return s;
}

}  // namespace qss

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qsstokes/evolution/stepper.hpp"

namespace qss {

enum class Regime { stable, neutral, unstable };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::stable: return "stable";
    case Regime::neutral: return "neutral";
    default: return "unstable";
  }
}

inline Regime regime_of(const PhysParams& p) {
  const double s = p.sigma() + p.theta();
  return s > 0.0 ? Regime::stable : (s < 0.0 ? Regime::unstable : Regime::neutral);
}

/// Guaranteed decay rate of the linearization in the stable regime.
inline std::optional<double> decay_bound(const PhysParams& p) {
  if (regime_of(p) != Regime::stable) return std::nullopt;
  const double s = p.sigma(), t = p.theta(), mu = p.mu();
  if (s >= t) return (s + t) / (4.0 * mu);
  return std::sqrt(s * t) / (2.0 * mu);
}

struct ModeEntry {
  int k = 0;
  double analytic = 0.0;
  double numeric = std::numeric_limits<double>::quiet_NaN();      // cos probe
  double numeric_sin = std::numeric_limits<double>::quiet_NaN();  // sin probe
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  double leakage = std::numeric_limits<double>::quiet_NaN();      // max off-mode response / max(|lambda_k|, 1)
};

struct SpectrumReport {
  std::vector<ModeEntry> modes;  // k = 1..k_max
  Regime regime = Regime::stable;
  std::optional<double> theta0;
  double constant_response = std::numeric_limits<double>::quiet_NaN();  // |dPsi(0)[1]|_inf
};

inline SpectrumReport analytic_spectrum(const PhysParams& p, int k_max) {
  if (k_max < 1) throw InvalidArgument("analytic_spectrum: k_max must be >= 1");
  SpectrumReport r;
  r.regime = regime_of(p);
  r.theta0 = decay_bound(p);
  for (int k = 1; k <= k_max; ++k) {
    ModeEntry e;
    e.k = k;
    e.analytic = linear_symbol(p, k);
    r.modes.push_back(e);
  }
  return r;
}

namespace detail {

/// Central difference of Psi at 0 in direction h.
inline Profile jacobian_probe(const PhysParams& p, const Profile& h, double eps) {
  return (0.5 / eps) * (eval_Psi(eps * h, p) - eval_Psi(-eps * h, p));
}

}  // namespace detail

/// DPsi(0) by central differences on cos(k x) and sin(k x), k = 1..k_max <= N/4.
inline SpectrumReport numeric_jacobian_at_zero(const PhysParams& p, const PeriodicGrid& grid, int k_max,
                                               double eps = 1e-6) {
  if (k_max > static_cast<int>(grid.size() / 4))
    throw InvalidArgument("numeric_jacobian_at_zero: k_max must be <= N/4");
  SpectrumReport r = analytic_spectrum(p, k_max);
  for (auto& e : r.modes) {
    const int k = e.k;
    const Profile c = Profile::from_function(grid, [k](double x) { return std::cos(k * x); });
    const Profile s = Profile::from_function(grid, [k](double x) { return std::sin(k * x); });
    const Profile gc = detail::jacobian_probe(p, c, eps);
    const Profile gs = detail::jacobian_probe(p, s, eps);
    e.numeric = mean_product(gc, c) / mean_product(c, c);
    e.numeric_sin = mean_product(gs, s) / mean_product(s, s);
    e.rel_error = std::abs(e.numeric - e.analytic) / std::max(std::abs(e.analytic), 1e-300);
    const double off = std::max(sup_norm(gc - e.numeric * c), sup_norm(gs - e.numeric_sin * s));
    e.leakage = off / std::max(std::abs(e.numeric), 1.0);
  }
  r.constant_response = sup_norm(detail::jacobian_probe(p, Profile::constant(grid, 1.0), eps));
  return r;
}

}  // namespace qss

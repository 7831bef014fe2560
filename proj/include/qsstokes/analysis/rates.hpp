#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "qsstokes/evolution/stepper.hpp"

namespace qss {

struct RateFit {
  double rate = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();  // rms of log-amplitude misfit
  std::size_t used = 0;
  bool reliable = false;
  std::string note;
};

namespace detail {

inline RateFit fit_log_linear(const std::vector<double>& t, const std::vector<double>& a) {
  RateFit r;
  r.used = t.size();
  if (t.size() < 2) {
    r.note = "fewer than 2 usable snapshots";
    return r;
  }
  const double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = std::log(a[i]);
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  const double den = n * stt - st * st;
  if (!(den > 0)) {
    r.note = "degenerate time samples";
    return r;
  }
  const double slope = (n * sty - st * sy) / den, icpt = (sy - slope * st) / n;
  double rss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double d = std::log(a[i]) - (icpt + slope * t[i]);
    rss += d * d;
  }
  r.rate = slope;
  r.residual = std::sqrt(rss / n);
  return r;
}

}  // namespace detail

/// Exponential decay rate of ||f - <f>||_2 over the last half of the snapshots whose
/// deviation sup-norm lies in [lo, hi]. Rate is positive for decay.
inline RateFit decay_rate_fit(const std::vector<Snapshot>& snaps, double lo = 1e-10, double hi = 1e-4,
                              double tail_fraction = 0.5) {
  std::vector<double> t, a;
  for (const auto& s : snaps) {
    const Profile dev = s.profile + (-s.profile.mean());
    const double sup = sup_norm(dev);
    if (sup >= lo && sup <= hi) {
      t.push_back(s.t);
      a.push_back(l2_norm(dev));
    }
  }
  const std::size_t keep = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(t.size())));
  t.erase(t.begin(), t.end() - static_cast<std::ptrdiff_t>(keep));
  a.erase(a.begin(), a.end() - static_cast<std::ptrdiff_t>(keep));
  RateFit r = detail::fit_log_linear(t, a);
  r.rate = -r.rate;
  if (r.used < 10) {
    r.reliable = false;
    if (r.note.empty()) r.note = "fewer than 10 snapshots in the amplitude window";
    return r;
  }
  for (std::size_t i = 1; i < a.size(); ++i)
    if (a[i] > a[i - 1] * (1 + 1e-12)) {
      r.note = "non-monotone tail";
      return r;
    }
  r.reliable = std::isfinite(r.rate);
  return r;
}

/// Growth rate of |f_k| (Fourier mode k) over snapshots whose sup-norm stays below cap.
inline RateFit mode_growth_fit(const std::vector<Snapshot>& snaps, int k, double cap = 1e-3) {
  std::vector<double> t, a;
  for (const auto& s : snaps) {
    if (sup_norm(s.profile) >= cap) break;
    const double amp = 2.0 * std::abs(s.profile.coefficient(k));
    if (amp > 0) {
      t.push_back(s.t);
      a.push_back(amp);
    }
  }
  RateFit r = detail::fit_log_linear(t, a);
  r.reliable = r.used >= 10 && std::isfinite(r.rate);
  if (r.used < 10 && r.note.empty()) r.note = "fewer than 10 snapshots below the amplitude cap";
  return r;
}

/// Smallest M with ||f(t) - <f>||_2 <= M e^{-rate t} ||f0 - <f0>||_2 over the snapshots.
inline double stability_constant(const std::vector<Snapshot>& snaps, double rate) {
  if (snaps.empty()) return std::numeric_limits<double>::quiet_NaN();
  auto dev = [](const Snapshot& s) { return l2_norm(s.profile + (-s.profile.mean())); };
  const double d0 = dev(snaps.front());
  if (!(d0 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double m = 0.0;
  for (const auto& s : snaps) m = std::max(m, dev(s) * std::exp(rate * (s.t - snaps.front().t)) / d0);
  return m;
}

}  // namespace qss

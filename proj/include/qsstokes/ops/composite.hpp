#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "qsstokes/ops/kernels.hpp"

namespace qss {

/// coeff * B_{n,m}^{p,q}(f|f)[f,...,f, .]
struct BTerm {
  double coeff;
  int n, m, p, q;
};

/// Expansion of the composites B1..B6 in diagonal B_{n,m}^{p,q}.
inline std::span<const BTerm> composite_terms(int index) {
  static const std::vector<BTerm> b1{{1, 0, 1, 0, 0}, {-1, 2, 1, 2, 0}};
  static const std::vector<BTerm> b2{{1, 1, 1, 0, 0}, {1, 1, 1, 2, 0}};
  static const std::vector<BTerm> b3{{1, 0, 2, 0, 1},  {1, 0, 2, 2, 1}, {-1, 2, 2, 0, 1}, {-2, 2, 2, 2, 1},
                                     {-1, 2, 2, 4, 1}, {1, 4, 2, 2, 1}, {1, 4, 2, 4, 1}};
  static const std::vector<BTerm> b4{{1, 1, 2, 0, 1}, {1, 1, 2, 2, 1}, {-1, 3, 2, 2, 1}, {-1, 3, 2, 4, 1}};
  static const std::vector<BTerm> b5{{2, 0, 1, 1, 1}, {-2, 2, 1, 3, 1}};
  static const std::vector<BTerm> b6{{2, 1, 1, 1, 1}, {2, 1, 1, 3, 1}};
  switch (index) {
    case 1: return b1;
    case 2: return b2;
    case 3: return b3;
    case 4: return b4;
    case 5: return b5;
    case 6: return b6;
    default: throw InvalidArgument("composite_terms: index must be in 1..6, got " + std::to_string(index));
  }
}

/// Kernel tables of B0..B6 for one profile f, reused across many densities.
/// Slot 0 holds only the smooth remainder of B0; the log-sine part is a Fourier multiplier.
class DiagonalKernels {
 public:
  explicit DiagonalKernels(const Profile& f) : DiagonalKernels(f, QuadratureRule::for_B(f.grid())) {}

  DiagonalKernels(const Profile& f, QuadratureRule rule) : f_(f), rule_(std::move(rule)) {
    if (!(rule_.grid() == f.grid())) throw InvalidArgument("DiagonalKernels: rule grid mismatch");
    const ShiftedSamples fs(f, rule_);
    const std::size_t n = f.size(), m = rule_.size();
    for (auto& k : k_) k.assign(n * m, 0.0);
    const auto tn = rule_.tan_half();
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t idx = i * m + j;
        const double dl = f[i] - fs(i, j);
        const double t = tn[j], cot = 1.0 / t;
        const double x = std::tanh(0.5 * dl) * cot;
        const double w = 0.5 * dl * cot;
        const double den = 1.0 + x * x;
        const double sh = std::sinh(0.5 * dl), sn = std::sin(0.5 * rule_.node(j));
        k_[0][idx] = std::log1p(sh * sh / (sn * sn));
        // powers needed by the B1..B6 expansions: n <= 4, q <= 1, m <= 2, p <= 4
        const double xp[5] = {1.0, x, x * x, x * x * x, x * x * x * x};
        const double wp[2] = {1.0, w};
        const double dinv[3] = {1.0, 1.0 / den, 1.0 / (den * den)};
        const double tp[5] = {cot, 1.0, t, t * t, t * t * t};
        for (int c = 1; c <= 6; ++c) {
          double acc = 0.0;
          for (const auto& tm : composite_terms(c)) acc += tm.coeff * xp[tm.n] * wp[tm.q] * dinv[tm.m] * tp[tm.p];
          k_[c][idx] = acc;
        }
      }
    });
  }

  const Profile& profile() const noexcept { return f_; }
  const QuadratureRule& rule() const noexcept { return rule_; }

  /// B_index(f)[density], index in 0..6.
  Profile apply(int index, const Profile& density) const {
    if (index < 0 || index > 6) throw InvalidArgument("composite_B: index must be in 0..6");
    require_same_grid(f_, density, "DiagonalKernels::apply");
    const ShiftedSamples phi(density, rule_);
    const std::size_t n = f_.size(), m = rule_.size();
    const auto& k = k_[index];
    std::vector<double> out(n);
    parallel_for(n, [&](std::size_t i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += rule_.weight(j) * k[i * m + j] * phi(i, j);
      out[i] = acc / two_pi;
    });
    if (index == 0) {
      const Profile ls = apply_multiplier(density, [](int kk) { return std::complex<double>(log_sine_symbol(kk)); });
      for (std::size_t i = 0; i < n; ++i) out[i] += ls[i];
    }
    return Profile(f_.grid(), std::move(out));
  }

 private:
  Profile f_;
  QuadratureRule rule_;
  std::array<std::vector<double>, 7> k_;
};

/// B_index(f)[density]; index 0 is B0.
inline Profile composite_B(int index, const Profile& f, const Profile& density) {
  if (index == 0) return eval_B0(f, density);
  return DiagonalKernels(f).apply(index, density);
}

/// Same composite assembled term by term through the general evaluator (slow reference path).
inline Profile composite_B_by_terms(int index, const Profile& f, const Profile& density, const QuadratureRule& rule) {
  std::vector<double> acc(f.size(), 0.0);
  for (const auto& t : composite_terms(index)) {
    const Profile b = eval_B(OperatorSpec::diagonal(t.n, t.m, t.p, t.q, f), density, rule);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t.coeff * b[i];
  }
  return Profile(f.grid(), std::move(acc));
}

}  // namespace qss

#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "qsstokes/core/parallel.hpp"
#include "qsstokes/ops/quadrature.hpp"

namespace qss {

/// Indices and arguments of one singular operator.
///   B_{n,m}^{p,q}(a|b)[c, .] : a has m entries, b has n, c has q
///   C_{n,m}(a)[b, .]         : uses n, m, a, b
///   A_{n,m}^{l,q}(a|b)[c, .] : uses n, m, q, a, b, c
struct OperatorSpec {
  int n = 0, m = 0, p = 0, q = 0;
  std::vector<Profile> a, b, c;

  /// All arguments equal to f.
  static OperatorSpec diagonal(int n, int m, int p, int q, const Profile& f) {
    OperatorSpec s;
    s.n = n;
    s.m = m;
    s.p = p;
    s.q = q;
    s.a.assign(m, f);
    s.b.assign(n, f);
    s.c.assign(q, f);
    return s;
  }

  std::string label() const {
    return "(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ",p=" + std::to_string(p) +
           ",q=" + std::to_string(q) + ")";
  }
};

namespace detail {

inline void check_args(const std::vector<Profile>& v, int count, const char* name, const Profile& density) {
  if (count < 0) throw InvalidArgument(std::string("operator index ") + name + " must be >= 0");
  if (static_cast<int>(v.size()) != count)
    throw InvalidArgument(std::string("operator argument list ") + name + " has wrong length");
  for (const auto& x : v) require_same_grid(x, density, "singular operator");
}

/// delta(i,j) = d(x_i) - d(x_i - s_j) and tanh(delta/2), shared between equal arguments.
struct DifferenceTable {
  std::vector<double> delta, th;
};

class DifferenceTables {
 public:
  explicit DifferenceTables(const QuadratureRule& rule) : rule_(rule) {}

  std::shared_ptr<const DifferenceTable> get(const Profile& d) {
    for (auto& [key, tab] : cache_)
      if (key.shares_storage_with(d)) return tab;
    ShiftedSamples sh(d, rule_);
    auto t = std::make_shared<DifferenceTable>();
    const std::size_t n = sh.rows(), m = sh.cols();
    t->delta.resize(n * m);
    t->th.resize(n * m);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const double dl = d[i] - sh(i, j);
        t->delta[i * m + j] = dl;
        t->th[i * m + j] = std::tanh(0.5 * dl);
      }
    cache_.emplace_back(d, t);
    return t;
  }

  std::vector<const DifferenceTable*> get_all(const std::vector<Profile>& v) {
    std::vector<const DifferenceTable*> out;
    for (const auto& d : v) {
      keep_.push_back(get(d));
      out.push_back(keep_.back().get());
    }
    return out;
  }

 private:
  const QuadratureRule& rule_;
  std::vector<std::pair<Profile, std::shared_ptr<const DifferenceTable>>> cache_;
  std::vector<std::shared_ptr<const DifferenceTable>> keep_;
};

struct Brackets {
  double b_form;  // prod(T_b/t) prod(dc/2t) / prod(1+(T_a/t)^2)
  double c_form;  // prod(db/s)  prod(dc/s)  / prod(1+(da/s)^2)
};

inline double b_bracket(const std::vector<const DifferenceTable*>& a, const std::vector<const DifferenceTable*>& b,
                        const std::vector<const DifferenceTable*>& c, std::size_t k, double cot) {
  double num = 1.0, den = 1.0;
  for (auto* t : b) num *= t->th[k] * cot;
  for (auto* t : c) num *= 0.5 * t->delta[k] * cot;
  for (auto* t : a) {
    const double x = t->th[k] * cot;
    den *= 1.0 + x * x;
  }
  return num / den;
}

inline double c_bracket(const std::vector<const DifferenceTable*>& a, const std::vector<const DifferenceTable*>& b,
                        const std::vector<const DifferenceTable*>& c, std::size_t k, double inv_s) {
  double num = 1.0, den = 1.0;
  for (auto* t : b) num *= t->delta[k] * inv_s;
  for (auto* t : c) num *= t->delta[k] * inv_s;
  for (auto* t : a) {
    const double x = t->delta[k] * inv_s;
    den *= 1.0 + x * x;
  }
  return num / den;
}

}  // namespace detail

/// B_{n,m}^{p,q}(a|b)[c, phi] = (1/2pi) PV int prod(T_b/t) prod((dc/2)/t) / prod(1+(T_a/t)^2) phi(x-s) t^{p-1} ds,
/// t = tan(s/2), T_d = tanh(delta d / 2).
inline Profile eval_B(const OperatorSpec& spec, const Profile& density, const QuadratureRule& rule) {
  detail::check_args(spec.a, spec.m, "a", density);
  detail::check_args(spec.b, spec.n, "b", density);
  detail::check_args(spec.c, spec.q, "c", density);
  if (spec.p < 0) throw InvalidArgument("eval_B: p must be >= 0");
  if (spec.p > spec.n + spec.q + 1)
    throw InvalidArgument("eval_B: p <= n+q+1 violated for " + spec.label());
  if (!(rule.grid() == density.grid())) throw InvalidArgument("eval_B: rule grid mismatch");

  detail::DifferenceTables tables(rule);
  const auto ta = tables.get_all(spec.a), tb = tables.get_all(spec.b), tc = tables.get_all(spec.c);
  const ShiftedSamples phi(density, rule);
  const std::size_t n = density.size(), m = rule.size();
  const auto tn = rule.tan_half();
  std::vector<double> tpow(m);
  for (std::size_t j = 0; j < m; ++j) tpow[j] = spec.p == 0 ? 1.0 / tn[j] : std::pow(tn[j], spec.p - 1);

  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      acc += rule.weight(j) * detail::b_bracket(ta, tb, tc, k, 1.0 / tn[j]) * tpow[j] * phi(i, j);
    }
    out[i] = acc / two_pi;
  });
  return Profile(density.grid(), std::move(out));
}

inline Profile eval_B(const OperatorSpec& spec, const Profile& density) {
  return eval_B(spec, density, QuadratureRule::for_B(density.grid()));
}

/// C_{n,m}(a)[b, phi] = (1/pi) PV int prod(db/s) / prod(1+(da/s)^2) phi(x-s)/s ds over (-pi, pi).
inline Profile eval_C(const OperatorSpec& spec, const Profile& density, const QuadratureRule& rule) {
  detail::check_args(spec.a, spec.m, "a", density);
  detail::check_args(spec.b, spec.n, "b", density);
  if (!(rule.grid() == density.grid())) throw InvalidArgument("eval_C: rule grid mismatch");

  detail::DifferenceTables tables(rule);
  const auto ta = tables.get_all(spec.a), tb = tables.get_all(spec.b);
  const std::vector<const detail::DifferenceTable*> none;
  const ShiftedSamples phi(density, rule);
  const std::size_t n = density.size(), m = rule.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double inv_s = 1.0 / rule.node(j);
      acc += rule.weight(j) * detail::c_bracket(ta, tb, none, i * m + j, inv_s) * inv_s * phi(i, j);
    }
    out[i] = acc / pi;
  });
  return Profile(density.grid(), std::move(out));
}

inline Profile eval_C(const OperatorSpec& spec, const Profile& density) {
  return eval_C(spec, density, QuadratureRule::for_C(density.grid()));
}

/// A_{n,m}^{l,q}: the B_{n,m}^{0,q} kernel times cot^l(s/2) minus its flat counterpart times (2/s)^l.
/// For l = 1 this is B_{n,m}^{0,q} - C_{n+q,m}(a)[(b,c), .].
inline Profile eval_A(const OperatorSpec& spec, int ell, const Profile& density, const QuadratureRule& rule) {
  if (ell != 1 && ell != 2) throw InvalidArgument("eval_A: l must be 1 or 2");
  detail::check_args(spec.a, spec.m, "a", density);
  detail::check_args(spec.b, spec.n, "b", density);
  detail::check_args(spec.c, spec.q, "c", density);
  if (!(rule.grid() == density.grid())) throw InvalidArgument("eval_A: rule grid mismatch");

  detail::DifferenceTables tables(rule);
  const auto ta = tables.get_all(spec.a), tb = tables.get_all(spec.b), tc = tables.get_all(spec.c);
  const ShiftedSamples phi(density, rule);
  const std::size_t n = density.size(), m = rule.size();
  const auto tn = rule.tan_half();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = i * m + j;
      const double cot = 1.0 / tn[j], inv_s = 1.0 / rule.node(j);
      const double kb = detail::b_bracket(ta, tb, tc, k, cot);
      const double kc = detail::c_bracket(ta, tb, tc, k, inv_s);
      const double d = ell == 1 ? kb * cot - kc * 2.0 * inv_s : kb * cot * cot - kc * 4.0 * inv_s * inv_s;
      acc += rule.weight(j) * d * phi(i, j);
    }
    out[i] = acc / two_pi;
  });
  return Profile(density.grid(), std::move(out));
}

inline Profile eval_A(const OperatorSpec& spec, int ell, const Profile& density) {
  return eval_A(spec, ell, density, QuadratureRule::for_C(density.grid()));
}

/// Periodic Hilbert transform, symbol -i sign(k); mean and Nyquist map to 0.
inline Profile hilbert_transform(const Profile& phi) {
  const int nyq = static_cast<int>(phi.size() / 2);
  return apply_multiplier(phi, [&](int k) -> std::complex<double> {
    if (k == 0 || k == nyq) return 0.0;
    return {0.0, -1.0};
  });
}

/// Fourier symbol of phi -> (1/2pi) int ln sin^2(s/2) phi(x-s) ds.
inline double log_sine_symbol(int k) { return k == 0 ? -std::log(4.0) : -1.0 / std::abs(k); }

/// B0(f)[phi] = (1/2pi) int ln(sin^2(s/2) + sinh^2(df/2)) phi(x-s) ds
///            = log-sine multiplier + (1/2pi) int ln(1 + sinh^2(df/2)/sin^2(s/2)) phi(x-s) ds.
inline Profile eval_B0(const Profile& f, const Profile& density, const QuadratureRule& rule) {
  require_same_grid(f, density, "eval_B0");
  const Profile smooth_free = apply_multiplier(density, [](int k) { return std::complex<double>(log_sine_symbol(k)); });
  const ShiftedSamples fs(f, rule), phi(density, rule);
  const std::size_t n = f.size(), m = rule.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double sh = std::sinh(0.5 * (f[i] - fs(i, j)));
      const double sn = std::sin(0.5 * rule.node(j));
      acc += rule.weight(j) * std::log1p(sh * sh / (sn * sn)) * phi(i, j);
    }
    out[i] = smooth_free[i] + acc / two_pi;
  });
  return Profile(f.grid(), std::move(out));
}

inline Profile eval_B0(const Profile& f, const Profile& density) {
  return eval_B0(f, density, QuadratureRule::for_B(f.grid()));
}

}  // namespace qss

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qsstokes/ops/kernels.hpp"

namespace qss {

/// B^{p,q,k}(f)[f1..fk][.] = B_{n,m}^{p,q+k}(f|f)[f,..,f (q times), f1..fk, .].
struct MultilinearB {
  int n = 0, m = 0, p = 0, q = 0;
  Profile f;
  std::vector<Profile> directions;  // f1..fk

  OperatorSpec spec() const {
    OperatorSpec s = OperatorSpec::diagonal(n, m, p, q, f);
    s.q = q + static_cast<int>(directions.size());
    s.c.insert(s.c.end(), directions.begin(), directions.end());
    return s;
  }

  Profile apply(const Profile& density) const { return eval_B(spec(), density); }
  Profile apply(const Profile& density, const QuadratureRule& rule) const { return eval_B(spec(), density, rule); }
};

/// Finite sum of multilinear B terms acting on a density.
struct BLinearCombination {
  std::vector<std::pair<double, MultilinearB>> terms;

  Profile apply(const Profile& density) const {
    return apply(density, QuadratureRule::for_B(density.grid()));
  }

  Profile apply(const Profile& density, const QuadratureRule& rule) const {
    std::vector<double> acc(density.size(), 0.0);
    for (const auto& [c, t] : terms) {
      const Profile v = t.apply(density, rule);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * v[i];
    }
    return Profile(density.grid(), std::move(acc));
  }
};

/// Frechet derivative of f -> B^{p,q,k}(f)[f1..fk] at base.f in the given direction.
/// The new direction is appended after the existing ones; terms with negative indices vanish.
inline BLinearCombination frechet_B(const MultilinearB& base, const Profile& direction) {
  require_same_grid(base.f, direction, "frechet_B");
  BLinearCombination out;
  auto add = [&](double coeff, int n, int m, int p, int q) {
    if (coeff == 0.0 || n < 0 || m < 0 || q < 0) return;
    MultilinearB t{n, m, p, q, base.f, base.directions};
    t.directions.push_back(direction);
    out.terms.emplace_back(coeff, std::move(t));
  };
  const int n = base.n, m = base.m, p = base.p, q = base.q;
  add(n, n - 1, m, p, q);
  add(-n, n + 1, m, p + 2, q);
  add(2.0 * m, n + 3, m + 1, p + 2, q);
  add(-2.0 * m, n + 1, m + 1, p, q);
  add(q, n, m, p, q - 1);
  return out;
}

/// dB0(f0)[f] = 2 B_{1,1}^{1,0,1}(f0)[f] + 2 B_{1,1}^{3,0,1}(f0)[f].
inline BLinearCombination frechet_B0(const Profile& f0, const Profile& direction) {
  require_same_grid(f0, direction, "frechet_B0");
  BLinearCombination out;
  out.terms.emplace_back(2.0, MultilinearB{1, 1, 1, 0, f0, {direction}});
  out.terms.emplace_back(2.0, MultilinearB{1, 1, 3, 0, f0, {direction}});
  return out;
}

}  // namespace qss

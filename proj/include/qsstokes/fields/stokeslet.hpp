#pragma once

#include <array>
#include <cmath>

#include "qsstokes/core/grid.hpp"

namespace qss {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;  // row-major: m[i][j]

struct StokesletValue {
  Mat2 U;  // U[i][k]: component i of the velocity for a point force along e_k
  Vec2 P;  // pressure for a point force along e_k
};

/// x1-periodic Stokeslet in closed form, D = sin^2(x1/2) + sinh^2(x2/2):
/// U = (1/8pi)[ln D I - x2 [[-K2, K1], [K1, K2]]], P = -(1/4pi)(K1, K2),
/// K1 = sin x1/(cosh x2 - cos x1), K2 = sinh x2/(cosh x2 - cos x1).
inline StokesletValue stokeslet_eval(Vec2 x) {
  x[0] = std::remainder(x[0], two_pi);
  const double sa = std::sin(0.5 * x[0]), sh = std::sinh(0.5 * x[1]);
  const double d = sa * sa + sh * sh;
  if (!(d > 0.0)) throw DomainError("stokeslet_eval: singular at the lattice points (2 pi k, 0)");
  const double k1 = std::sin(x[0]) / (2.0 * d), k2 = std::sinh(x[1]) / (2.0 * d);
  const double ld = std::log(d), c = 1.0 / (8.0 * pi);
  StokesletValue r;
  r.U = {Vec2{c * (ld + x[1] * k2), -c * x[1] * k1}, Vec2{-c * x[1] * k1, c * (ld - x[1] * k2)}};
  r.P = {-k1 / (4.0 * pi), -k2 / (4.0 * pi)};
  return r;
}

/// Same tensor assembled from the periodic Green function G = -(1/4pi) ln D and its gradient,
/// written with t = tan(x1/2), T = tanh(x2/2). Not defined on x1 = pi (mod 2 pi).
inline StokesletValue stokeslet_eval_composed(Vec2 x) {
  const double t = std::tan(0.5 * x[0]), T = std::tanh(0.5 * x[1]);
  const double q = t * t + T * T;
  if (!(q > 0.0) || !std::isfinite(t)) throw DomainError("stokeslet_eval_composed: outside the tan chart");
  const double G = -std::log(q / ((1.0 + t * t) * (1.0 - T * T))) / (4.0 * pi);
  const double d1G = -(t * (1.0 - T * T) / q) / (4.0 * pi);
  const double d2G = -(T * (1.0 + t * t) / q) / (4.0 * pi);
  const double c = -0.5;
  StokesletValue r;
  // U^1 = c (G + x2 d2G, -x2 d1G), U^2 = c (-x2 d1G, G - x2 d2G)
  r.U = {Vec2{c * (G + x[1] * d2G), c * (-x[1] * d1G)}, Vec2{c * (-x[1] * d1G), c * (G - x[1] * d2G)}};
  r.P = {d1G, d2G};
  return r;
}

}  // namespace qss

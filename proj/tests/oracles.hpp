#pragma once
// Reference integrals computed straight from closed-form f and phi, in long double with
// Boost adaptive quadrature, independent of the library's tables and rules.
// f and phi must be generic callables (templated on the argument type).

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

namespace oracle {

using R = long double;
constexpr R pi = std::numbers::pi_v<long double>;

/// PV int_{-pi}^{pi} k(s) ds for k with a simple pole at 0, folded onto (0, pi).
template <class K>
double pv_integral(K k) {
  auto even = [&](R s) { return k(s) + k(-s); };
  R err = 0;
  return static_cast<double>(
      boost::math::quadrature::gauss_kronrod<R, 61>::integrate(even, R(0), pi, 15, R(1e-15), &err));
}

/// B_{n,m}^{p,q}(f|f)[f.., phi] at x, all arguments f.
template <class F, class P>
double B(int n, int m, int p, int q, F f, P phi, double x0) {
  const R x = x0;
  auto k = [&](R s) {
    const R t = std::tan(s / 2);
    const R d = f(x) - f(x - s);
    const R X = std::tanh(d / 2) / t, W = d / 2 / t;
    return std::pow(X, n) * std::pow(W, q) / std::pow(1 + X * X, m) * std::pow(t, p) / t * phi(x - s);
  };
  return pv_integral(k) / (2 * static_cast<double>(pi));
}

/// C_{n,m}(f)[f.., phi] at x.
template <class F, class P>
double C(int n, int m, F f, P phi, double x0) {
  const R x = x0;
  auto k = [&](R s) {
    const R r = (f(x) - f(x - s)) / s;
    return std::pow(r, n) / std::pow(1 + r * r, m) * phi(x - s) / s;
  };
  return pv_integral(k) / static_cast<double>(pi);
}

/// B0(f)[phi] at x; tanh-sinh copes with the log singularity at the endpoint s = 0.
template <class F, class P>
double B0(F f, P phi, double x0) {
  const R x = x0;
  auto k = [&](R s) {
    // ln(a^2 + b^2) = 2 ln|s/2| + ln((a/(s/2))^2 + (b/(s/2))^2), safe as s -> 0
    const R h = s / 2;
    const R a = std::sin(h) / h, b = std::sinh((f(x) - f(x - s)) / 2) / h;
    return (2 * std::log(std::abs(h)) + std::log(a * a + b * b)) * phi(x - s);
  };
  auto even = [&](R s) { return k(s) + k(-s); };
  boost::math::quadrature::tanh_sinh<R> ts;
  return static_cast<double>(ts.integrate(even, R(0), pi)) / (2 * static_cast<double>(pi));
}

/// Si(x) = int_0^x sin t / t dt.
inline double Si(double x) {
  R err = 0;
  auto g = [](R t) { return t == 0 ? R(1) : std::sin(t) / t; };
  return static_cast<double>(
      boost::math::quadrature::gauss_kronrod<R, 61>::integrate(g, R(0), R(x), 15, R(1e-17), &err));
}

}  // namespace oracle

#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "qsstokes/core/spectral.hpp"
#include "qsstokes/fields/stokeslet.hpp"

namespace qss {

/// Integrands of Z0..Z6 at r = x - (s, f(s)), without density and 1/(2 pi):
/// ln((C-c)/2), sin r1/(C-c), sinh r2/(C-c), r2(1-cC)/(C-c)^2, (r2/2) sin r1 sinh r2/(C-c)^2,
/// r2 Z1, r2 Z2, with C = cosh r2, c = cos r1.
using KernelSet = std::array<double, 7>;

inline KernelSet z_kernels(double r1, double r2) {
  KernelSet k{};
  const double s1 = std::sin(r1), c1 = std::cos(r1);
  if (std::abs(r2) <= 20.0) {
    // C - c = 2D with D = sin^2(r1/2) + sinh^2(r2/2); 1 - cC = 2 sin^2(r1/2) - 2c sinh^2(r2/2)
    const double sa = std::sin(0.5 * r1), sh = std::sinh(0.5 * r2);
    const double a2 = sa * sa, h2 = sh * sh, d = a2 + h2;
    k[0] = std::log(d);
    k[1] = s1 / (2.0 * d);
    k[2] = std::sinh(r2) / (2.0 * d);
    k[3] = r2 * (a2 - c1 * h2) / (2.0 * d * d);
    k[4] = r2 * s1 * std::sinh(r2) / (8.0 * d * d);
  } else {
    // scaled by e = exp(-|r2|) to avoid overflow: C - c = g/(2e), g = 1 - 2ce + e^2
    const double e = std::exp(-std::abs(r2)), sg = r2 > 0 ? 1.0 : -1.0;
    const double g = 1.0 - 2.0 * c1 * e + e * e;
    k[0] = std::abs(r2) + std::log(g) - std::log(4.0);
    k[1] = 2.0 * e * s1 / g;
    k[2] = sg * (1.0 - e * e) / g;
    k[3] = r2 * 2.0 * e * (2.0 * e - c1 * (1.0 + e * e)) / (g * g);
    k[4] = r2 * s1 * sg * e * (1.0 - e * e) / (g * g);
  }
  k[5] = r2 * k[1];
  k[6] = r2 * k[2];
  return k;
}

enum class FieldQuadrature { trapezoid, adaptive };

struct FieldOptions {
  std::size_t nodes = 0;      // trapezoid nodes; 0 -> max(N, 256)
  double collar = -1.0;       // excluded distance from the interface; < 0 -> 10 * 2pi/nodes
  FieldQuadrature method = FieldQuadrature::trapezoid;
  double tol = 1e-12;         // adaptive: relative tolerance
  std::size_t max_panels = 4000;  // adaptive: panel budget
};

enum class Side { minus = -1, plus = 1 };

/// Foot point of x on the interface.
struct Proximity {
  double distance;
  double s;  // parameter of the closest point (unwrapped near x1)
};

/// Off-interface evaluation of Z_k(f)[phi](x) = (1/2pi) int K_k(x - (s, f(s))) phi(s) ds
/// for several densities at once.
class LayerPotentials {
 public:
  LayerPotentials(const Profile& f, std::vector<Profile> densities, FieldOptions opt = {})
      : f_(f), dens_(std::move(densities)), opt_(opt), fi_(f) {
    for (const auto& d : dens_) require_same_grid(f, d, "LayerPotentials");
    if (opt_.nodes == 0) opt_.nodes = std::max<std::size_t>(f.size(), 256);
    if (opt_.collar < 0.0) opt_.collar = 10.0 * two_pi / static_cast<double>(opt_.nodes);
    if (opt_.nodes % 2 != 0 || opt_.nodes < f.size())
      throw InvalidArgument("LayerPotentials: trapezoid node count must be even and >= N");
    fm_ = upsample(f, opt_.nodes);
    for (const auto& d : dens_) {
      dm_.push_back(upsample(d, opt_.nodes));
      di_.emplace_back(d);
    }
  }

  const FieldOptions& options() const noexcept { return opt_; }
  const Profile& profile() const noexcept { return f_; }
  std::size_t density_count() const noexcept { return dens_.size(); }

  Side side(Vec2 x) const { return x[1] > fi_(x[0]) ? Side::plus : Side::minus; }

  Proximity proximity(Vec2 x) const {
    const std::size_t m = opt_.nodes;
    const double h = two_pi / static_cast<double>(m);
    double best = std::numeric_limits<double>::infinity(), sbest = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double s = h * static_cast<double>(j);
      const double r1 = std::remainder(x[0] - s, two_pi), r2 = x[1] - fm_[j];
      const double d2 = r1 * r1 + r2 * r2;
      if (d2 < best) {
        best = d2;
        sbest = x[0] - r1;  // unwrapped next to x1
      }
    }
    // golden-section refinement on [s - h, s + h]
    auto dist2 = [&](double s) {
      const double r1 = x[0] - s, r2 = x[1] - fi_(s);
      return r1 * r1 + r2 * r2;
    };
    double a = sbest - h, b = sbest + h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a), fc = dist2(c), fd = dist2(d);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = dist2(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = dist2(d);
      }
    }
    const double s = 0.5 * (a + b);
    return {std::sqrt(std::min(best, dist2(s))), s};
  }

  /// Z0..Z6 for every density at x. Trapezoid mode refuses points inside the collar.
  std::vector<KernelSet> eval(Vec2 x) const {
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) throw InvalidArgument("LayerPotentials: non-finite point");
    const Proximity px = proximity(x);
    if (opt_.method == FieldQuadrature::trapezoid) {
      if (px.distance < opt_.collar)
        throw ProximityError("point within " + std::to_string(px.distance) + " of the interface (collar " +
                                 std::to_string(opt_.collar) + ")",
                             px.distance, opt_.collar);
      return eval_trapezoid(x);
    }
    if (px.distance == 0.0) throw DomainError("LayerPotentials: point lies on the interface");
    return eval_adaptive(x, px.s);
  }

 private:
  std::vector<KernelSet> eval_trapezoid(Vec2 x) const {
    const std::size_t m = opt_.nodes, nd = dens_.size();
    const double h = two_pi / static_cast<double>(m);
    std::vector<KernelSet> out(nd, KernelSet{});
    for (std::size_t j = 0; j < m; ++j) {
      const KernelSet k = z_kernels(x[0] - h * static_cast<double>(j), x[1] - fm_[j]);
      for (std::size_t d = 0; d < nd; ++d)
        for (int z = 0; z < 7; ++z) out[d][z] += k[z] * dm_[d][j];
    }
    for (auto& o : out)
      for (auto& v : o) v /= static_cast<double>(m);
    return out;
  }

  // integrand components: 7 kernels x densities
  std::vector<double> integrand(Vec2 x, double s) const {
    const KernelSet k = z_kernels(x[0] - s, x[1] - fi_(s));
    std::vector<double> v(7 * dens_.size());
    for (std::size_t d = 0; d < dens_.size(); ++d) {
      const double p = di_[d](s);
      for (int z = 0; z < 7; ++z) v[7 * d + z] = k[z] * p;
    }
    return v;
  }

  // one G7-K15 panel; returns the Kronrod estimate, err gets max |K - G|
  std::vector<double> panel(Vec2 x, double a, double b, double& err, double& l1) const {
    using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
    using g7 = boost::math::quadrature::gauss<double, 7>;
    const auto& xk = gk::abscissa();
    const auto& wk = gk::weights();
    const auto& wg = g7::weights();
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    const std::size_t nc = 7 * dens_.size();
    std::vector<double> kr(nc, 0.0), ga(nc, 0.0);
    const auto f0 = integrand(x, c);
    for (std::size_t i = 0; i < nc; ++i) {
      kr[i] = wk[0] * f0[i];
      ga[i] = wg[0] * f0[i];
    }
    for (std::size_t j = 1; j < xk.size(); ++j) {
      const auto fp = integrand(x, c + hw * xk[j]), fm = integrand(x, c - hw * xk[j]);
      for (std::size_t i = 0; i < nc; ++i) {
        kr[i] += wk[j] * (fp[i] + fm[i]);
        if (j % 2 == 0) ga[i] += wg[j / 2] * (fp[i] + fm[i]);
      }
    }
    err = 0.0;
    l1 = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
      kr[i] *= hw;
      ga[i] *= hw;
      err = std::max(err, std::abs(kr[i] - ga[i]));
      l1 = std::max(l1, std::abs(kr[i]));
    }
    return kr;
  }

  struct Panel {
    double a, b, err;
    std::vector<double> val;
    bool operator<(const Panel& o) const { return err < o.err; }
  };

  // Global adaptive bisection: always split the panel with the largest error estimate.
  std::vector<KernelSet> eval_adaptive(Vec2 x, double s_foot) const {
    const std::size_t nc = 7 * dens_.size();
    std::priority_queue<Panel> heap;
    std::vector<double> total(nc, 0.0);
    double err_sum = 0.0;
    auto push = [&](double a, double b) {
      double err = 0.0, l1 = 0.0;
      auto v = panel(x, a, b, err, l1);
      for (std::size_t i = 0; i < nc; ++i) total[i] += v[i];
      err_sum += err;
      heap.push(Panel{a, b, err, std::move(v)});
    };
    // panels meet at the foot point where the integrand peaks
    for (int k = 0; k < 8; ++k) push(s_foot - pi + k * pi / 4, s_foot - pi + (k + 1) * pi / 4);
    for (;;) {
      double scale = 1.0;
      for (double v : total) scale = std::max(scale, std::abs(v));
      const Panel& worst = heap.top();
      if (err_sum <= opt_.tol * scale || heap.size() >= opt_.max_panels || worst.b - worst.a < 1e-15) break;
      const double a = worst.a, b = worst.b, c = 0.5 * (a + b);
      for (std::size_t i = 0; i < nc; ++i) total[i] -= worst.val[i];
      err_sum -= worst.err;
      heap.pop();
      push(a, c);
      push(c, b);
    }
    // exact re-summation, independent of the split history's rounding
    std::fill(total.begin(), total.end(), 0.0);
    std::vector<Panel> panels;
    while (!heap.empty()) {
      panels.push_back(heap.top());
      heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    for (const auto& pn : panels)
      for (std::size_t i = 0; i < nc; ++i) total[i] += pn.val[i];
    std::vector<KernelSet> out(dens_.size());
    for (std::size_t d = 0; d < dens_.size(); ++d)
      for (int z = 0; z < 7; ++z) out[d][z] = total[7 * d + z] / two_pi;
    return out;
  }

  Profile f_;
  std::vector<Profile> dens_;
  FieldOptions opt_;
  TrigInterpolant fi_;
  Profile fm_ = f_;
  std::vector<Profile> dm_;
  std::vector<TrigInterpolant> di_;
};

/// Z_index(f)[density](x), index in 0..6.
inline double eval_Z(int index, const Profile& f, const Profile& density, Vec2 x, const FieldOptions& opt = {}) {
  if (index < 0 || index > 6) throw InvalidArgument("eval_Z: index must be in 0..6");
  return LayerPotentials(f, {density}, opt).eval(x)[0][index];
}

}  // namespace qss

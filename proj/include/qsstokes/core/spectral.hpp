#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qsstokes/core/profile.hpp"

namespace qss {

/// Full coefficient vector in FFT order: index k for k = 0..N/2, index N+k for k < 0.
/// The Nyquist entry holds the whole real cos(N x / 2) amplitude.
inline std::vector<std::complex<double>> to_spectral(const Profile& p) {
  const std::size_t n = p.size();
  auto half = p.half_spectrum();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k <= n / 2; ++k) out[k] = half[k];
  for (std::size_t k = 1; k < n / 2; ++k) out[n - k] = std::conj(half[k]);
  return out;
}

inline Profile from_spectral(const PeriodicGrid& grid, const std::vector<std::complex<double>>& full) {
  if (full.size() != grid.size()) throw InvalidArgument("from_spectral: size mismatch");
  std::vector<std::complex<double>> half(full.begin(), full.begin() + grid.size() / 2 + 1);
  return Profile::from_half_spectrum(grid, half);
}

/// Apply a Fourier multiplier m(k), k = 0..N/2 (odd symbols extend by conjugate symmetry).
/// Only the real part of m(N/2) * c_{N/2} survives.
template <class Symbol>
Profile apply_multiplier(const Profile& p, Symbol symbol) {
  auto half = p.half_spectrum();
  std::vector<std::complex<double>> c(half.begin(), half.end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= symbol(static_cast<int>(k));
  return Profile::from_half_spectrum(p.grid(), c);
}

/// d^order/dx^order of the interpolant; the Nyquist mode is dropped.
inline Profile spectral_derivative(const Profile& p, int order = 1) {
  const int nyq = static_cast<int>(p.size() / 2);
  return apply_multiplier(p, [&](int k) -> std::complex<double> {
    if (k == nyq) return 0.0;
    return std::pow(std::complex<double>(0.0, k), order);
  });
}

/// Values of the interpolant at x_i + offset.
inline std::vector<double> sample_shifted(const Profile& p, double offset) {
  auto half = p.half_spectrum();
  std::vector<std::complex<double>> c(half.begin(), half.end());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] *= std::polar(1.0, static_cast<double>(k) * offset);
  std::vector<double> v(p.size());
  p.grid().fft().backward(c, v);
  return v;
}

/// Values at the staggered nodes x_i + pi/N.
inline std::vector<double> half_shift_samples(const Profile& p) {
  return sample_shifted(p, pi / static_cast<double>(p.size()));
}

/// Evaluate the trigonometric interpolant (and optionally its derivative) at any x.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Profile& p) {
    auto h = p.half_spectrum();
    nyq_ = static_cast<int>(p.size() / 2);
    a0_ = h[0].real();
    re_.resize(nyq_ + 1);
    im_.resize(nyq_ + 1);
    for (int k = 1; k <= nyq_; ++k) {
      re_[k] = h[k].real();
      im_[k] = h[k].imag();
    }
  }

  double operator()(double x) const { return eval(x, nullptr); }

  double eval(double x, double* derivative) const {
    // 2 Re(sum c_k e^{ikx}), Nyquist counted once
    const std::complex<double> step = std::polar(1.0, x);
    std::complex<double> e = 1.0;
    double v = a0_, d = 0.0;
    for (int k = 1; k <= nyq_; ++k) {
      e *= step;
      if (k % 64 == 0) e = std::polar(1.0, k * x);  // curb drift of the recurrence
      const double w = (k == nyq_) ? 1.0 : 2.0;
      v += w * (re_[k] * e.real() - im_[k] * e.imag());
      if (k != nyq_) d += w * k * (-re_[k] * e.imag() - im_[k] * e.real());
    }
    if (derivative) *derivative = d;
    return v;
  }

 private:
  int nyq_ = 0;
  double a0_ = 0.0;
  std::vector<double> re_, im_;
};

/// Zero-padded resampling on a finer grid of size m >= N (m even).
inline Profile upsample(const Profile& p, std::size_t m) {
  if (m < p.size()) throw InvalidArgument("upsample: target smaller than source");
  if (m == p.size()) return p;
  PeriodicGrid fine(m);
  auto h = p.half_spectrum();
  std::vector<std::complex<double>> c(m / 2 + 1, 0.0);
  const std::size_t nyq = p.size() / 2;
  for (std::size_t k = 0; k < nyq; ++k) c[k] = h[k];
  c[nyq] = 0.5 * h[nyq];  // real cos(nyq x) stays real: half to +k, half to -k
  std::vector<double> v(m);
  fine.fft().backward(c, v);
  return Profile(fine, std::move(v));
}

/// Antiderivative with zero mean of p - <p>.
inline Profile mean_free_antiderivative(const Profile& p) {
  const int nyq = static_cast<int>(p.size() / 2);
  return apply_multiplier(p, [&](int k) -> std::complex<double> {
    if (k == 0 || k == nyq) return 0.0;
    return std::complex<double>(0.0, -1.0 / k);
  });
}

/// Share of the non-mean spectral energy carried by |k| > N/4. Small values mean the profile is resolved.
inline double spectral_tail(const Profile& p) {
  const auto c = p.half_spectrum();
  const std::size_t quarter = p.size() / 4;
  double hi = 0.0, all = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double e = std::norm(c[k]);
    all += e;
    if (k > quarter) hi += e;
  }
  return all > 0.0 ? hi / all : 0.0;
}

struct Geometry {
  std::vector<double> omega;      // sqrt(1 + f'^2)
  std::vector<double> nu1, nu2;   // unit normal (-f', 1)/omega
  std::vector<double> tau1, tau2; // unit tangent (1, f')/omega
  std::vector<double> curvature;  // f'' / omega^3
};

inline Geometry geometry_quantities(const Profile& f) {
  const Profile d1 = spectral_derivative(f, 1);
  const Profile d2 = spectral_derivative(f, 2);
  const std::size_t n = f.size();
  Geometry g;
  g.omega.resize(n);
  g.nu1.resize(n);
  g.nu2.resize(n);
  g.tau1.resize(n);
  g.tau2.resize(n);
  g.curvature.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = std::hypot(1.0, d1[i]);
    g.omega[i] = w;
    g.nu1[i] = -d1[i] / w;
    g.nu2[i] = 1.0 / w;
    g.tau1[i] = 1.0 / w;
    g.tau2[i] = d1[i] / w;
    g.curvature[i] = d2[i] / (w * w * w);
  }
  return g;
}

}  // namespace qss

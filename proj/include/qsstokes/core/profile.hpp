#pragma once

#include <cmath>
#include <algorithm>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qsstokes/core/grid.hpp"

namespace qss {

/// Samples of a real 2 pi-periodic function on a PeriodicGrid, together with its
/// trigonometric-interpolant coefficients. Immutable: copies share storage.
class Profile {
 public:
  Profile(PeriodicGrid grid, std::vector<double> values) : grid_(std::move(grid)) {
    if (values.size() != grid_.size())
      throw InvalidArgument("Profile: expected " + std::to_string(grid_.size()) + " values, got " +
                            std::to_string(values.size()));
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("Profile: non-finite sample");
    auto d = std::make_shared<Data>();
    d->values = std::move(values);
    d->coeffs.resize(grid_.size() / 2 + 1);
    grid_.fft().forward(d->values, d->coeffs);
    data_ = std::move(d);
  }

  template <class F>
  static Profile from_function(const PeriodicGrid& grid, F&& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
    return Profile(grid, std::move(v));
  }

  static Profile constant(const PeriodicGrid& grid, double c) {
    return Profile(grid, std::vector<double>(grid.size(), c));
  }

  static Profile zero(const PeriodicGrid& grid) { return constant(grid, 0.0); }

  /// Build from half-spectrum coefficients c_0..c_{N/2}.
  static Profile from_half_spectrum(const PeriodicGrid& grid, std::span<const std::complex<double>> c) {
    std::vector<double> v(grid.size());
    grid.fft().backward(c, v);
    return Profile(grid, std::move(v));
  }

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return data_->values; }
  double operator[](std::size_t i) const noexcept { return data_->values[i]; }

  std::span<const std::complex<double>> half_spectrum() const noexcept { return data_->coeffs; }

  /// Coefficient of exp(i k x), |k| <= N/2. The Nyquist mode is split evenly between +-N/2.
  std::complex<double> coefficient(int k) const {
    const int half = static_cast<int>(size() / 2);
    if (k < -half || k > half) throw InvalidArgument("Profile::coefficient: |k| > N/2");
    if (k == half || k == -half) return 0.5 * data_->coeffs[half];
    return k >= 0 ? data_->coeffs[k] : std::conj(data_->coeffs[-k]);
  }

  double mean() const noexcept { return data_->coeffs[0].real(); }

  bool shares_storage_with(const Profile& o) const noexcept { return data_ == o.data_; }

 private:
  struct Data {
    std::vector<double> values;
    std::vector<std::complex<double>> coeffs;
  };
  PeriodicGrid grid_;
  std::shared_ptr<const Data> data_;
};

inline void require_same_grid(const Profile& a, const Profile& b, const char* where) {
  if (!(a.grid() == b.grid())) throw InvalidArgument(std::string(where) + ": profiles live on different grids");
}

template <class Op>
Profile pointwise(const Profile& a, const Profile& b, Op op) {
  require_same_grid(a, b, "pointwise");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return Profile(a.grid(), std::move(v));
}

template <class Op>
Profile map(const Profile& a, Op op) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i]);
  return Profile(a.grid(), std::move(v));
}

inline Profile operator+(const Profile& a, const Profile& b) { return pointwise(a, b, std::plus<>{}); }
inline Profile operator-(const Profile& a, const Profile& b) { return pointwise(a, b, std::minus<>{}); }
inline Profile operator*(const Profile& a, const Profile& b) { return pointwise(a, b, std::multiplies<>{}); }
inline Profile operator*(double s, const Profile& a) {
  return map(a, [s](double x) { return s * x; });
}
inline Profile operator-(const Profile& a) {
  return map(a, [](double x) { return -x; });
}
inline Profile operator+(const Profile& a, double c) {
  return map(a, [c](double x) { return x + c; });
}

inline double sup_norm(const Profile& a) {
  double m = 0.0;
  for (double v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

/// Continuous L2 norm over one period, sqrt(h sum v_i^2).
inline double l2_norm(const Profile& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(a.grid().spacing() * s);
}

/// <a b> = (1/2 pi) int a b, exact for the interpolants when the product is resolved.
inline double mean_product(const Profile& a, const Profile& b) {
  require_same_grid(a, b, "mean_product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

}  // namespace qss

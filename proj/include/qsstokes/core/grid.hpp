#pragma once

#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "qsstokes/core/errors.hpp"
#include "qsstokes/core/fft.hpp"

namespace qss {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform periodic grid x_i = 2 pi i / N on [0, 2 pi), N even and >= 8.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(std::size_t n) : n_(n) {
    if (n < 8 || n % 2 != 0)
      throw InvalidArgument("PeriodicGrid: N must be even and >= 8, got " + std::to_string(n));
    fft_ = shared_fft(n);
  }

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return two_pi / static_cast<double>(n_); }
  double node(std::size_t i) const noexcept { return spacing() * static_cast<double>(i); }
  double shifted_node(std::size_t i) const noexcept { return spacing() * (static_cast<double>(i) + 0.5); }

  std::vector<double> nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
  }
  std::vector<double> shifted_nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = shifted_node(i);
    return x;
  }

  const RealFft& fft() const noexcept { return *fft_; }

  friend bool operator==(const PeriodicGrid& a, const PeriodicGrid& b) noexcept { return a.n_ == b.n_; }

 private:
  std::size_t n_;
  std::shared_ptr<const RealFft> fft_;
};

}  // namespace qss

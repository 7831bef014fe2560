#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qsstokes/core/profile.hpp"
#include "qsstokes/core/spectral.hpp"

namespace qss {

enum class RuleKind { shifted_trapezoid, gauss_legendre };

/// Nodes s_j in (-pi, pi), symmetric about 0 and never equal to 0, with weights summing to 2 pi.
/// Symmetry makes the odd 1/s part of a principal-value integrand cancel pairwise.
class QuadratureRule {
 public:
  /// s_j = -pi + (j + 1/2) 2 pi / M with M = oversample * N.
  static QuadratureRule shifted_trapezoid(const PeriodicGrid& grid, std::size_t oversample = 1) {
    if (oversample == 0) throw InvalidArgument("shifted_trapezoid: oversample must be >= 1");
    const std::size_t m = grid.size() * oversample;
    QuadratureRule r(grid, RuleKind::shifted_trapezoid, oversample);
    const double h = two_pi / static_cast<double>(m);
    r.nodes_.resize(m);
    r.weights_.assign(m, h);
    for (std::size_t j = 0; j < m; ++j) r.nodes_[j] = -pi + (static_cast<double>(j) + 0.5) * h;
    r.finish();
    return r;
  }

  /// Gauss-Legendre on [-pi, pi]; count defaults to 2N and must be even.
  static QuadratureRule gauss_legendre(const PeriodicGrid& grid, std::size_t count = 0) {
    if (count == 0) count = 2 * grid.size();
    if (count % 2 != 0) throw InvalidArgument("gauss_legendre: node count must be even");
    QuadratureRule r(grid, RuleKind::gauss_legendre, 0);
    r.nodes_.resize(count);
    r.weights_.resize(count);
    const std::size_t half = count / 2;
    for (std::size_t i = 0; i < half; ++i) {
      // Newton on P_count from the Tricomi guess
      double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(count) + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= count; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
          p0 = p1;
          p1 = pk;
        }
        dp = static_cast<double>(count) * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      r.nodes_[i] = -pi * x;  // ascending
      r.nodes_[count - 1 - i] = pi * x;
      r.weights_[i] = r.weights_[count - 1 - i] = pi * w;
    }
    r.finish();
    return r;
  }

  /// Default rule of each family: trapezoid for B, Gauss-Legendre for A and C.
  static QuadratureRule for_B(const PeriodicGrid& g) { return shifted_trapezoid(g); }
  static QuadratureRule for_C(const PeriodicGrid& g) { return gauss_legendre(g); }

  /// Copy with one weight scaled by (1 + rel). Used only to inject a known fault.
  QuadratureRule corrupted(double rel) const {
    QuadratureRule r = *this;
    r.weights_[r.weights_.size() / 3] *= 1.0 + rel;
    return r;
  }

  RuleKind kind() const noexcept { return kind_; }
  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> tan_half() const noexcept { return tan_half_; }
  double node(std::size_t j) const noexcept { return nodes_[j]; }
  double weight(std::size_t j) const noexcept { return weights_[j]; }

  /// True when x_i - s_j always lands on a staggered grid node (trapezoid, M = N).
  bool on_staggered_grid() const noexcept { return kind_ == RuleKind::shifted_trapezoid && oversample_ == 1; }

 private:
  QuadratureRule(const PeriodicGrid& g, RuleKind k, std::size_t over) : grid_(g), kind_(k), oversample_(over) {}

  void finish() {
    tan_half_.resize(nodes_.size());
    for (std::size_t j = 0; j < nodes_.size(); ++j) tan_half_[j] = std::tan(0.5 * nodes_[j]);
  }

  PeriodicGrid grid_;
  RuleKind kind_;
  std::size_t oversample_;
  std::vector<double> nodes_, weights_, tan_half_;
};

/// Table d(x_i - s_j), row i = collocation node, column j = quadrature node.
class ShiftedSamples {
 public:
  ShiftedSamples(const Profile& d, const QuadratureRule& rule) : n_(d.size()), m_(rule.size()) {
    if (!(d.grid() == rule.grid())) throw InvalidArgument("ShiftedSamples: grid mismatch");
    v_.resize(n_ * m_);
    if (rule.on_staggered_grid()) {
      // x_i - s_j = x_{i + N/2 - j - 1} + h/2
      const auto half = half_shift_samples(d);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < m_; ++j) v_[i * m_ + j] = half[(i + n_ / 2 + n_ - j - 1) % n_];
    } else {
      for (std::size_t j = 0; j < m_; ++j) {
        const auto col = sample_shifted(d, -rule.node(j));
        for (std::size_t i = 0; i < n_; ++i) v_[i * m_ + j] = col[i];
      }
    }
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t cols() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return v_[i * m_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept { return {v_.data() + i * m_, m_}; }

 private:
  std::size_t n_, m_;
  std::vector<double> v_;
};

}  // namespace qss

#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "qsstokes/core/errors.hpp"

namespace qss {

// fftw's planner is not thread-safe; executing an existing plan is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Real <-> half-complex transform of fixed length n.
/// Coefficients are normalized: v_i = sum_{|k|<=n/2} c_k exp(i k x_i), x_i = 2 pi i / n.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    if (n == 0) throw InvalidArgument("RealFft: zero length");
    std::vector<double> re(n);
    std::vector<std::complex<double>> cx(n / 2 + 1);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(),
                                reinterpret_cast<fftw_complex*>(cx.data()), flags);
    bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(cx.data()),
                                re.data(), flags);
    if (!fwd_ || !bwd_) throw InvalidArgument("RealFft: fftw planning failed");
  }

  ~RealFft() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// values (n) -> coefficients c_0..c_{n/2}, divided by n.
  void forward(std::span<const double> values, std::span<std::complex<double>> coeffs) const {
    if (values.size() != n_ || coeffs.size() != n_ / 2 + 1)
      throw InvalidArgument("RealFft::forward: size mismatch");
    // out-of-place r2c leaves its input untouched
    fftw_execute_dft_r2c(fwd_, const_cast<double*>(values.data()),
                         reinterpret_cast<fftw_complex*>(coeffs.data()));
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& c : coeffs) c *= scale;
  }

  /// coefficients c_0..c_{n/2} -> values (n). Imaginary parts of c_0 and c_{n/2} are dropped.
  void backward(std::span<const std::complex<double>> coeffs, std::span<double> values) const {
    if (values.size() != n_ || coeffs.size() != n_ / 2 + 1)
      throw InvalidArgument("RealFft::backward: size mismatch");
    std::vector<std::complex<double>> work(coeffs.begin(), coeffs.end());  // c2r destroys input
    work.front().imag(0.0);
    if (n_ % 2 == 0) work.back().imag(0.0);
    fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(work.data()), values.data());
  }

 private:
  std::size_t n_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

/// One plan pair per length, shared process-wide.
inline std::shared_ptr<const RealFft> shared_fft(std::size_t n) {
  fftw_planner_mutex();  // construct first so it outlives the cache below
  static std::mutex m;
  static std::map<std::size_t, std::shared_ptr<const RealFft>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<RealFft>(n);
  return slot;
}

}  // namespace qss

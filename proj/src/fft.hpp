#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace mnkurt::detail {

/// Real-input FFT of a fixed length backed by FFTW. One instance per thread;
/// plan creation is serialized internally.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(RealFft&&) noexcept;
  RealFft& operator=(RealFft&&) noexcept;
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept;

  /// in.size() == n, out.size() == n/2 + 1. Unnormalized.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);
  /// in.size() == n/2 + 1, out.size() == n. Scaled by 1/n so that
  /// inverse(forward(x)) == x.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mnkurt::detail

#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace mnkurt::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct RealFft::Impl {
  std::size_t n;
  double* real;
  fftw_complex* spec;
  fftw_plan fwd;
  fftw_plan inv;

  explicit Impl(std::size_t size) : n(size) {
    std::lock_guard lock(planner_mutex());
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_r2c_1d(len, real, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(len, spec, real, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
    fftw_free(real);
    fftw_free(spec);
  }
};

RealFft::RealFft(std::size_t n) : impl_(std::make_unique<Impl>(n)) {}
RealFft::~RealFft() = default;
RealFft::RealFft(RealFft&&) noexcept = default;
RealFft& RealFft::operator=(RealFft&&) noexcept = default;

std::size_t RealFft::size() const noexcept { return impl_->n; }

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) {
  std::copy(in.begin(), in.end(), impl_->real);
  fftw_execute(impl_->fwd);
  const auto* s = reinterpret_cast<const std::complex<double>*>(impl_->spec);
  std::copy(s, s + out.size(), out.begin());
}

void RealFft::inverse(std::span<const std::complex<double>> in, std::span<double> out) {
  std::copy(in.begin(), in.end(), reinterpret_cast<std::complex<double>*>(impl_->spec));
  fftw_execute(impl_->inv);  // c2r clobbers spec, which is scratch here
  const double scale = 1.0 / static_cast<double>(impl_->n);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = impl_->real[i] * scale;
}

}  // namespace mnkurt::detail

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/error.hpp"

namespace mnkurt {

namespace {

constexpr double kKaiserBeta = 10.0;
constexpr int kTapsPerPhase = 64;
// Above this many phases the coefficient table would get large; evaluate the
// kernel on the fly instead.
constexpr long kMaxTablePhases = 4096;

double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * double(k));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

/// Windowed-sinc kernel evaluated at offset `t` input samples from the output
/// instant. `cutoff` is in cycles per input sample, `half_width` in input
/// samples.
class Kernel {
 public:
  Kernel(double cutoff, double half_width)
      : cutoff_(cutoff), half_width_(half_width), norm_(1.0 / bessel_i0(kKaiserBeta)) {}

  double operator()(double t) const {
    const double r = t / half_width_;
    if (std::abs(r) >= 1.0) return 0.0;
    const double w = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) * norm_;
    const double x = 2.0 * cutoff_ * t;
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    return 2.0 * cutoff_ * sinc * w;
  }

  double half_width() const { return half_width_; }

 private:
  double cutoff_;
  double half_width_;
  double norm_;
};

}  // namespace

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
  if (target_rate <= 0) {
    throw Error(ErrorCode::InvalidArgument,
                "target rate must be positive, got " + std::to_string(target_rate));
  }
  buf.validate();
  if (buf.sample_rate == target_rate) return buf;

  const long g = std::gcd(static_cast<long>(buf.sample_rate), static_cast<long>(target_rate));
  const long up = target_rate / g;
  const long down = buf.sample_rate / g;

  // Cut off at the lower Nyquist; widen the kernel when decimating so each
  // phase still spans 64 output-rate taps.
  const double ratio = static_cast<double>(up) / static_cast<double>(down);
  const double stretch = std::min(1.0, ratio);
  const double cutoff = 0.5 * stretch;
  const double half_width = 0.5 * kTapsPerPhase / stretch;
  const Kernel kernel(cutoff, half_width);
  const long span = static_cast<long>(std::ceil(half_width));

  const std::size_t n_in = buf.num_frames();
  const auto n_out = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_in) * static_cast<double>(up) /
                   static_cast<double>(down)));

  // Taps for phase p cover input indices base - span + 1 .. base + span where
  // base = floor(n * down / up).
  const long taps = 2 * span;
  std::vector<double> table;
  const bool use_table = up <= kMaxTablePhases;
  if (use_table) {
    table.resize(static_cast<std::size_t>(up * taps));
    for (long p = 0; p < up; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up);
      for (long j = 0; j < taps; ++j) {
        const long offset = j - span + 1;  // input index relative to base
        table[static_cast<std::size_t>(p * taps + j)] = kernel(frac - static_cast<double>(offset));
      }
    }
  }

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.channels.reserve(buf.num_channels());
  for (const auto& in : buf.channels) {
    std::vector<double> y(n_out, 0.0);
    for (std::size_t n = 0; n < n_out; ++n) {
      const long long pos = static_cast<long long>(n) * down;
      const long base = static_cast<long>(pos / up);
      const long phase = static_cast<long>(pos % up);
      const double frac = static_cast<double>(phase) / static_cast<double>(up);
      double acc = 0.0;
      for (long j = 0; j < taps; ++j) {
        const long idx = base + j - span + 1;
        if (idx < 0 || idx >= static_cast<long>(n_in)) continue;
        const double h = use_table ? table[static_cast<std::size_t>(phase * taps + j)]
                                   : kernel(frac - static_cast<double>(j - span + 1));
        acc += h * in[static_cast<std::size_t>(idx)];
      }
      y[n] = acc;
    }
    out.channels.push_back(std::move(y));
  }
  return out;
}

}  // namespace mnkurt

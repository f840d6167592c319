#include "mnkurt/stft.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "mnkurt/error.hpp"

namespace mnkurt {

namespace {

template <typename Sink>
void for_each_frame(std::span<const double> samples, const StftConfig& cfg, Sink&& sink) {
  cfg.validate();
  const std::size_t frames = cfg.num_frames(samples.size());
  if (frames == 0) {
    throw Error(ErrorCode::TooShort,
                "signal of " + std::to_string(samples.size()) +
                    " samples is shorter than one analysis window (" +
                    std::to_string(cfg.window_len) + ")");
  }
  const auto window = sine_window(cfg.window_len);
  detail::RealFft fft(cfg.dft_len);
  std::vector<double> buf(cfg.dft_len, 0.0);
  std::vector<std::complex<double>> spec(cfg.num_bins());
  for (std::size_t l = 0; l < frames; ++l) {
    const double* x = samples.data() + l * cfg.hop;
    for (std::size_t n = 0; n < cfg.window_len; ++n) buf[n] = x[n] * window[n];
    fft.forward(buf, spec);
    sink(l, frames, std::span<const std::complex<double>>(spec));
  }
}

}  // namespace

StftConfig StftConfig::with_window(std::size_t window_len, int sample_rate) {
  return StftConfig{window_len, window_len / 2, window_len * 2, sample_rate};
}

void StftConfig::validate() const {
  if (window_len < 4 || !std::has_single_bit(window_len)) {
    throw Error(ErrorCode::InvalidArgument,
                "window length must be a power of two >= 4, got " + std::to_string(window_len));
  }
  if (hop * 2 != window_len || dft_len != 2 * window_len) {
    throw Error(ErrorCode::InvalidArgument,
                "STFT requires hop == window/2 and dft == 2*window");
  }
  if (sample_rate <= 0) throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
}

std::vector<double> sine_window(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::sin(std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return w;
}

ComplexSpectrogram analyze(std::span<const double> samples, const StftConfig& cfg) {
  ComplexSpectrogram out;
  out.config = cfg;
  for_each_frame(samples, cfg, [&](std::size_t l, std::size_t frames, auto spec) {
    if (l == 0) out.bins = FrameMatrix<std::complex<double>>(frames, cfg.num_bins());
    std::copy(spec.begin(), spec.end(), out.bins.frame(l).begin());
  });
  return out;
}

ComplexSpectrogram analyze(const AudioBuffer& buf, const StftConfig& cfg) {
  if (buf.num_channels() != 1) {
    throw Error(ErrorCode::InvalidChannel, "STFT analysis needs a single-channel buffer");
  }
  if (buf.sample_rate != cfg.sample_rate) {
    throw Error(ErrorCode::InvalidArgument,
                "buffer rate " + std::to_string(buf.sample_rate) +
                    " does not match STFT rate " + std::to_string(cfg.sample_rate));
  }
  return analyze(buf.channels.front(), cfg);
}

PowerSpectrogram power(const ComplexSpectrogram& spec) {
  PowerSpectrogram out;
  out.config = spec.config;
  out.power = FrameMatrix<double>(spec.bins.frames(), spec.bins.bins());
  auto src = spec.bins.values();
  auto dst = out.power.values();
  std::transform(src.begin(), src.end(), dst.begin(),
                 [](const std::complex<double>& z) { return std::norm(z); });
  return out;
}

PowerSpectrogram power_spectrogram(std::span<const double> samples, const StftConfig& cfg) {
  PowerSpectrogram out;
  out.config = cfg;
  for_each_frame(samples, cfg, [&](std::size_t l, std::size_t frames, auto spec) {
    if (l == 0) out.power = FrameMatrix<double>(frames, cfg.num_bins());
    auto row = out.power.frame(l);
    for (std::size_t k = 0; k < spec.size(); ++k) row[k] = std::norm(spec[k]);
  });
  return out;
}

std::vector<double> synthesize_samples(const ComplexSpectrogram& spec) {
  const auto& cfg = spec.config;
  cfg.validate();
  const std::size_t frames = spec.bins.frames();
  std::vector<double> out(cfg.span_samples(frames), 0.0);
  if (frames == 0) return out;

  const auto window = sine_window(cfg.window_len);
  detail::RealFft fft(cfg.dft_len);
  std::vector<double> frame(cfg.dft_len);
  for (std::size_t l = 0; l < frames; ++l) {
    fft.inverse(spec.bins.frame(l), frame);
    double* y = out.data() + l * cfg.hop;
    for (std::size_t n = 0; n < cfg.window_len; ++n) y[n] += frame[n] * window[n];
  }
  return out;
}

AudioBuffer synthesize(const ComplexSpectrogram& spec) {
  return AudioBuffer::mono(synthesize_samples(spec), spec.config.sample_rate);
}

}  // namespace mnkurt

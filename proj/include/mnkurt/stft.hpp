#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/frame_matrix.hpp"

namespace mnkurt {

/// Sine window of `window_len`, 50% overlap, DFT of twice the window length.
struct StftConfig {
  std::size_t window_len = 1024;
  std::size_t hop = 512;
  std::size_t dft_len = 2048;
  int sample_rate = kAnalysisRate;

  /// Derives hop and DFT length from the window length.
  static StftConfig with_window(std::size_t window_len, int sample_rate = kAnalysisRate);

  void validate() const;

  std::size_t num_bins() const noexcept { return dft_len / 2 + 1; }
  double bin_hz(std::size_t k) const noexcept {
    return static_cast<double>(k) * sample_rate / static_cast<double>(dft_len);
  }
  /// Number of full frames in a signal of n samples; the tail is dropped.
  std::size_t num_frames(std::size_t n) const noexcept {
    return n < window_len ? 0 : (n - window_len) / hop + 1;
  }
  /// Samples spanned by `frames` frames.
  std::size_t span_samples(std::size_t frames) const noexcept {
    return frames == 0 ? 0 : (frames - 1) * hop + window_len;
  }

  bool operator==(const StftConfig&) const = default;
};

struct ComplexSpectrogram {
  FrameMatrix<std::complex<double>> bins;
  StftConfig config;

  std::size_t frames() const noexcept { return bins.frames(); }
};

struct PowerSpectrogram {
  FrameMatrix<double> power;
  StftConfig config;

  std::size_t frames() const noexcept { return power.frames(); }
};

/// w(n) = sin(pi (n + 0.5) / N).
std::vector<double> sine_window(std::size_t n);

ComplexSpectrogram analyze(std::span<const double> samples, const StftConfig& cfg);
/// Requires a single-channel buffer at cfg.sample_rate.
ComplexSpectrogram analyze(const AudioBuffer& buf, const StftConfig& cfg);

PowerSpectrogram power(const ComplexSpectrogram& spec);

/// analyze() followed by power() without keeping the complex frames.
PowerSpectrogram power_spectrogram(std::span<const double> samples, const StftConfig& cfg);

/// Windowed overlap-add resynthesis. The result spans
/// cfg.span_samples(frames) samples; the first and last hop carry the window
/// taper, everything in between reconstructs exactly.
std::vector<double> synthesize_samples(const ComplexSpectrogram& spec);
AudioBuffer synthesize(const ComplexSpectrogram& spec);

}  // namespace mnkurt

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

/// SplitMix64 (Steele, Lea, Flood 2014). Chosen because its output sequence is
/// fully specified by a few lines of integer arithmetic, so masks can be
/// reproduced bit for bit by any implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform integer in [0, n) by rejection sampling; n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Independent generator for sub-stream `stream`, derived from the seed
  /// without advancing this generator.
  SplitMix64 split(std::uint64_t stream) const;

 private:
  std::uint64_t state_;
};

enum class MaskScope { Global, PerFrame };

inline constexpr double kMaxPercentZeroed = 99.8;

struct DistortionSpec {
  double percent_zeroed = 0.0;  // in [0, 99.8]
  std::uint64_t seed = 0;
  MaskScope scope = MaskScope::Global;

  void validate() const;
};

/// round(percent / 100 * total).
std::size_t zeroed_count(double percent, std::size_t total);

/// Row-major frames x bins mask, true for bins to be zeroed. Global scope
/// draws zeroed_count(percent, frames*bins) distinct positions with a partial
/// Fisher-Yates shuffle; per-frame scope draws zeroed_count(percent, bins) in
/// every frame.
std::vector<bool> zero_mask(std::size_t frames, std::size_t bins, const DistortionSpec& d);

ComplexSpectrogram zero_bins(const ComplexSpectrogram& spec, const DistortionSpec& d);

/// STFT, bin zeroing and overlap-add resynthesis, per channel. Channel c draws
/// its mask with seed SplitMix64(seed).split(c).next(). Because the shuffle
/// draws positions in a fixed order, a larger percentage with the same seed
/// zeroes a superset of the bins of a smaller one. The output spans the analyzed
/// samples (the tail shorter than one hop is dropped). Requires
/// buf.sample_rate == cfg.sample_rate.
AudioBuffer distort_audio(const AudioBuffer& buf, const DistortionSpec& d,
                          const StftConfig& cfg = {});

}  // namespace mnkurt

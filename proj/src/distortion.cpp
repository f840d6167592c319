#include "mnkurt/distortion.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "mnkurt/error.hpp"

namespace mnkurt {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  // Reject the low (2^64 mod n) outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

SplitMix64 SplitMix64::split(std::uint64_t stream) const {
  SplitMix64 mixer(state_ ^ (stream * 0xD1B54A32D192ED03ull));
  return SplitMix64(mixer.next());
}

void DistortionSpec::validate() const {
  if (!(percent_zeroed >= 0.0 && percent_zeroed <= kMaxPercentZeroed)) {
    throw Error(ErrorCode::InvalidArgument,
                "percent of zeroed bins must lie in [0, 99.8], got " +
                    std::to_string(percent_zeroed));
  }
}

std::size_t zeroed_count(double percent, std::size_t total) {
  return static_cast<std::size_t>(std::llround(percent / 100.0 * static_cast<double>(total)));
}

namespace {

void mark_random_subset(std::vector<bool>& mask, std::size_t offset, std::size_t total,
                        std::size_t count, SplitMix64& rng) {
  std::vector<std::uint32_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0u);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
    std::swap(idx[i], idx[j]);
    mask[offset + idx[i]] = true;
  }
}

}  // namespace

std::vector<bool> zero_mask(std::size_t frames, std::size_t bins, const DistortionSpec& d) {
  d.validate();
  std::vector<bool> mask(frames * bins, false);
  SplitMix64 rng(d.seed);
  if (d.scope == MaskScope::Global) {
    mark_random_subset(mask, 0, frames * bins, zeroed_count(d.percent_zeroed, frames * bins), rng);
  } else {
    const std::size_t count = zeroed_count(d.percent_zeroed, bins);
    for (std::size_t l = 0; l < frames; ++l) mark_random_subset(mask, l * bins, bins, count, rng);
  }
  return mask;
}

ComplexSpectrogram zero_bins(const ComplexSpectrogram& spec, const DistortionSpec& d) {
  ComplexSpectrogram out = spec;
  const auto mask = zero_mask(spec.bins.frames(), spec.bins.bins(), d);
  auto values = out.bins.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (mask[i]) values[i] = {0.0, 0.0};
  }
  return out;
}

AudioBuffer distort_audio(const AudioBuffer& buf, const DistortionSpec& d,
                          const StftConfig& cfg) {
  d.validate();
  buf.validate();
  if (buf.sample_rate != cfg.sample_rate) {
    throw Error(ErrorCode::InvalidArgument,
                "distortion expects audio at " + std::to_string(cfg.sample_rate) + " Hz, got " +
                    std::to_string(buf.sample_rate));
  }
  const SplitMix64 root(d.seed);
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  for (std::size_t c = 0; c < buf.num_channels(); ++c) {
    DistortionSpec channel_spec = d;
    channel_spec.seed = root.split(c).next();
    const auto spec = analyze(buf.channels[c], cfg);
    out.channels.push_back(synthesize_samples(zero_bins(spec, channel_spec)));
  }
  return out;
}

}  // namespace mnkurt

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace mnkurt {

inline constexpr int kAnalysisRate = 48000;

/// Multichannel audio with samples nominally in [-1, 1].
struct AudioBuffer {
  std::vector<std::vector<double>> channels;
  int sample_rate = kAnalysisRate;

  static AudioBuffer mono(std::vector<double> samples, int rate = kAnalysisRate);

  std::size_t num_channels() const noexcept { return channels.size(); }
  std::size_t num_frames() const noexcept {
    return channels.empty() ? 0 : channels.front().size();
  }

  /// Throws InvalidArgument when channels differ in length or the rate is not
  /// positive.
  void validate() const;

  bool operator==(const AudioBuffer&) const = default;
};

enum class SampleFormat { Pcm16, Pcm24, Pcm32, Float32, Float64 };

// WAV (RIFF) codec. Integer PCM is normalized by 2^(bits-1).
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf,
                                     SampleFormat format = SampleFormat::Float32);
AudioBuffer load_wav(const std::filesystem::path& path);
void save_wav(const std::filesystem::path& path, const AudioBuffer& buf,
              SampleFormat format = SampleFormat::Float32);

/// Band-limited rational resampling: Kaiser-windowed sinc (beta 10, 64 taps
/// per phase). Returns the input unchanged when the rates already match.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

/// Either the average of all channels or one channel by index.
struct ChannelSelection {
  std::optional<std::size_t> index;  // empty means mono mix

  static ChannelSelection mono_mix() { return {}; }
  static ChannelSelection channel(std::size_t i) { return {i}; }
};

AudioBuffer downmix_or_select(const AudioBuffer& buf, ChannelSelection sel);

/// Resamples to the analysis rate when needed.
AudioBuffer to_analysis_rate(const AudioBuffer& buf, int rate = kAnalysisRate);

/// Shortens every channel of both buffers to the shorter of the two lengths.
void trim_to_common_length(AudioBuffer& a, AudioBuffer& b);

}  // namespace mnkurt

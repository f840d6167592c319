#pragma once

#include <filesystem>
#include <istream>
#include <utility>
#include <vector>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

/// Per-frame flag, true where the target source is active.
struct ActivityMask {
  std::vector<bool> active;

  std::size_t size() const noexcept { return active.size(); }
  std::size_t inactive_count() const;
};

inline constexpr double kActivityGateDbfs = -60.0;

/// Whitespace-separated 0/1 values, one per frame. '#' starts a comment.
ActivityMask parse_activity_mask(std::istream& in);
ActivityMask load_activity_mask(const std::filesystem::path& path);

/// A frame of the (mono-mixed) target is active when its RMS over the
/// analysis window exceeds `gate_dbfs`.
ActivityMask activity_from_target(const AudioBuffer& target, const StftConfig& cfg,
                                  double gate_dbfs = kActivityGateDbfs);

/// Keeps the frames where the target is inactive, in order, in both
/// spectrograms. Throws TargetAlwaysActive if none remain.
std::pair<PowerSpectrogram, PowerSpectrogram> select_noise_frames(
    const PowerSpectrogram& nin, const PowerSpectrogram& nout, const ActivityMask& mask);

}  // namespace mnkurt

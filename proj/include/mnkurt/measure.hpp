#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnkurt/activity.hpp"
#include "mnkurt/audio_io.hpp"
#include "mnkurt/error.hpp"
#include "mnkurt/measure_result.hpp"
#include "mnkurt/prepro.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

/// How multichannel inputs are reduced. WorstChannel measures each channel on
/// its own and reports the one with the highest scaled value.
enum class ChannelPolicy { WorstChannel, MonoMix, Index };

struct MeasureOptions {
  StftConfig stft;
  SubBandLayout bands = SubBandLayout::standard();
  ChannelPolicy channels = ChannelPolicy::WorstChannel;
  std::size_t channel_index = 0;  // used with ChannelPolicy::Index
  /// When set, only frames where the target is inactive are measured.
  std::optional<ActivityMask> activity;
};

/// One measure on a pair of power spectrograms.
MeasureResult measure_spectra(MeasureId id, const PowerSpectrogram& nin,
                              const PowerSpectrogram& nout,
                              const SubBandLayout& bands = SubBandLayout::standard());

struct MeasureOutcome {
  MeasureId id = MeasureId::DeltaKurt;
  std::optional<MeasureResult> result;
  std::optional<ErrorCode> error;
  std::string reason;

  bool ok() const { return result.has_value(); }
};

/// Measures `nout` against the unprocessed `nin`. Both inputs are brought to
/// the analysis rate and trimmed to the shorter length; each spectrogram is
/// computed once and shared by all requested measures. Errors of individual
/// measures are reported in the outcome; input errors (bad channel index,
/// too short) throw.
std::vector<MeasureOutcome> measure_audio(std::span<const MeasureId> ids, const AudioBuffer& nin,
                                          const AudioBuffer& nout,
                                          const MeasureOptions& options = {});

/// Single-measure convenience wrapper; rethrows the measure's error.
MeasureResult measure_audio(MeasureId id, const AudioBuffer& nin, const AudioBuffer& nout,
                            const MeasureOptions& options = {});

/// The perceptually improved measure on audio, with the worst-channel policy
/// for stereo input.
MeasureResult delta_kurt_pi(const AudioBuffer& nin, const AudioBuffer& nout,
                            const StftConfig& cfg = {},
                            const SubBandLayout& layout = SubBandLayout::standard());

}  // namespace mnkurt

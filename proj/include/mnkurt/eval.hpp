#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/distortion.hpp"
#include "mnkurt/measure.hpp"

namespace mnkurt {

/// Product-moment correlation. Requires n >= 3; throws NotComputable when
/// either sequence is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b (tie corrected). Requires n >= 3; throws NotComputable when
/// either sequence is entirely tied.
double kendall(std::span<const double> x, std::span<const double> y);

/// Scaled measure outputs of a response experiment: one row per item, one
/// column per control level.
struct ResponseCurve {
  MeasureId measure = MeasureId::DeltaKurtPi;
  std::vector<double> control;
  std::vector<std::string> items;
  std::vector<std::vector<double>> per_item;
  std::vector<double> mean;
  std::vector<double> std;  // population deviation across items

  /// Fills mean and std from per_item.
  void update_statistics();
};

/// rho = m * s * (1 - d): m = max(0, tau-b of control vs. mean response),
/// s = (max mean - min mean) / 100, d = clamp(mean inter-item std / 50, 0, 1).
/// A constant mean curve scores 0.
double response_score(const ResponseCurve& curve);

struct ScoredItem {
  std::string id;
  double score = 0.0;    // perceptual
  double measure = 0.0;  // objective
  bool reference = false;
};

struct CorrelationReport {
  double pearson_r = 0.0;
  double kendall_t = 0.0;
  std::size_t n = 0;
  std::vector<std::string> excluded;  // reference items left out
};

/// Correlation of measure against score over the non-reference items.
CorrelationReport correlate(std::span<const ScoredItem> items);

struct NamedAudio {
  std::string name;
  AudioBuffer audio;
};

struct ExperimentOptions {
  StftConfig stft;
  SubBandLayout bands = SubBandLayout::standard();
  ChannelPolicy channels = ChannelPolicy::WorstChannel;
  std::uint64_t seed = 0;
  MaskScope scope = MaskScope::Global;
  std::size_t jobs = 1;
  /// Receives one message per skipped item.
  std::function<void(const std::string&)> warn;
};

/// Distorts every item at every level and measures the result against the
/// item's own zero-distortion resynthesis, so level 0 compares identical
/// signals. Item i uses SplitMix64(seed).split(i).next() at every level, which
/// makes the masks nested across levels. Items that fail are dropped and
/// reported through options.warn. The result does not depend on jobs.
std::map<MeasureId, ResponseCurve> run_response_experiment(std::span<const NamedAudio> items,
                                                           std::span<const double> levels,
                                                           std::span<const MeasureId> measures,
                                                           const ExperimentOptions& options);

ResponseCurve run_response_experiment(std::span<const NamedAudio> items,
                                      std::span<const double> levels, MeasureId measure,
                                      const ExperimentOptions& options);

}  // namespace mnkurt

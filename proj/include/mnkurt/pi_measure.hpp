#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mnkurt/measure_result.hpp"
#include "mnkurt/prepro.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

/// Per-frame sub-band log-kurtosis ratios are limited to this value, which is
/// also the full-scale raw value of the measure.
inline constexpr double kBandDeltaKurtLimit = 0.5;

/// 10 log10 of the mean of 10^(x/10) over the band bins of a thresholded
/// frame. Non-negative for non-negative input.
double band_energy_weight(std::span<const double> nout_plus_frame,
                          std::span<const std::size_t> bins);

/// |ln(kurt_out / kurt_in)| restricted to `bins`, limited to
/// kBandDeltaKurtLimit. Empty if either in-band kurtosis is undefined.
std::optional<double> band_delta_kurt(std::span<const double> nin_plus_frame,
                                      std::span<const double> nout_plus_frame,
                                      std::span<const std::size_t> bins);

struct BandAnalysis {
  std::size_t band = 0;
  std::vector<double> dk_frames;  // per kept frame, 0 where invalid
  std::vector<double> weights;    // per kept frame
  std::vector<bool> valid;        // dk computable for the frame
  double selection_score = 0.0;   // sum of w * dk over valid frames
  double weight_sum = 0.0;        // sum of w over valid frames

  /// No valid frame carries weight, so the band cannot produce a mean.
  bool degenerate() const { return !(weight_sum > 0.0); }
  std::size_t valid_count() const;
};

BandAnalysis analyze_band(const PreprocessedPair& pre, std::span<const std::size_t> bins,
                          std::size_t band);

/// Index of the non-degenerate band with the largest selection score, lowest
/// index on ties. Throws NotComputable if every band is degenerate.
std::size_t select_band(std::span<const BandAnalysis> analyses);

/// The perceptually improved measure on a pair of power spectrograms:
/// pre-processing, per-band analysis, band selection and the
/// energy-weighted mean, rescaled by 200 onto [0, 100].
MeasureResult delta_kurt_pi(const PowerSpectrogram& nin, const PowerSpectrogram& nout,
                            const SubBandLayout& layout = SubBandLayout::standard());

}  // namespace mnkurt

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mnkurt/frame_matrix.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

inline constexpr double kPowerFloor = 1e-12;
inline constexpr double kDcWeightDb = -100.0;
inline constexpr double kThresholdOffsetDb = 20.0;

/// IEC 61672 A-weighting gain in dB, normalized to 0 dB at 1 kHz.
double a_weighting_db(double hz);

/// Per-bin A-weighting gains for the one-sided spectrum of `cfg`. The DC bin
/// gets kDcWeightDb.
std::vector<double> a_weight_table(const StftConfig& cfg);

/// 10 log10(max(X, floor)) + A(f_k).
FrameMatrix<double> to_dba(const PowerSpectrogram& pow);

struct Threshold {
  double p_dba = 0.0;  // energy-mean level of the dBA spectrogram
  double thr = 0.0;    // p_dba - 20
};

Threshold compute_threshold(const FrameMatrix<double>& dba);

/// max(x, thr) - thr, elementwise.
FrameMatrix<double> limit_shift(const FrameMatrix<double>& dba, double thr);

struct PreprocessedSpectrogram {
  FrameMatrix<double> values;
  std::vector<std::size_t> kept_frames;
  double thr = 0.0;
  double p_dba = 0.0;
};

struct PreprocessedPair {
  PreprocessedSpectrogram nin;
  PreprocessedSpectrogram nout;
};

/// Drops the frames in which the processed signal is entirely at or below the
/// threshold, from both signals at once. Throws EmptyAfterPreprocessing when
/// nothing survives.
PreprocessedPair discard_silent_frames(const FrameMatrix<double>& nin_plus,
                                       const FrameMatrix<double>& nout_plus,
                                       const Threshold& level);

/// Full chain: dBA conversion of both signals, threshold taken from the
/// processed signal and applied to both, limit/shift, silent-frame removal.
PreprocessedPair preprocess(const PowerSpectrogram& nin, const PowerSpectrogram& nout);

/// Half-open frequency interval (low_hz, high_hz].
struct Band {
  double low_hz = 0.0;
  double high_hz = 0.0;
  bool operator==(const Band&) const = default;
};

struct SubBandLayout {
  std::vector<Band> bands;

  /// (50, 750], (750, 6000], (6000, 16000] Hz.
  static SubBandLayout standard();
  /// Contiguous bands between consecutive edges.
  static SubBandLayout from_edges(std::span<const double> edges_hz);

  /// Throws InvalidArgument unless bands are non-empty, ascending and
  /// non-overlapping.
  void validate() const;

  bool operator==(const SubBandLayout&) const = default;
};

/// Bin indices per band: k belongs to a band iff low < f_k <= high. Throws
/// DegenerateBand for a band with fewer than two bins.
std::vector<std::vector<std::size_t>> band_bins(const SubBandLayout& layout,
                                                const StftConfig& cfg);

}  // namespace mnkurt

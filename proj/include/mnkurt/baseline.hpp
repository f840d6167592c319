#pragma once

#include "mnkurt/measure_result.hpp"
#include "mnkurt/stft.hpp"

namespace mnkurt {

// Clamping ranges used to map the baselines onto [0, 100].
inline constexpr double kDeltaKurtUpper = 1.4;
inline constexpr double kDeltaKurtWUpper = 2.2;

/// clamp(raw, 0, upper) / upper * 100.
double rescale_clamped(double raw, double upper);

/// ln(mean kurt_out / mean kurt_in) on raw power spectra; each mean runs over
/// that signal's own valid frames. Throws NotComputable when either signal has
/// no valid frame.
MeasureResult delta_kurt(const PowerSpectrogram& nin, const PowerSpectrogram& nout);

/// delta_kurt with negative values limited to zero.
MeasureResult delta_kurt_lim(const PowerSpectrogram& nin, const PowerSpectrogram& nout);

/// delta_kurt on alpha-weighted spectra, alpha computed per signal.
MeasureResult delta_kurt_w(const PowerSpectrogram& nin, const PowerSpectrogram& nout);

}  // namespace mnkurt

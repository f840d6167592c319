#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mnkurt/frame_matrix.hpp"

namespace mnkurt {

/// Sample kurtosis m4 / m2^2 across the values of one frame, with central
/// moments taken over all K values (divisor K). Empty when the frame has no
/// spread. Requires K >= 2.
std::optional<double> instantaneous_kurtosis(std::span<const double> frame);

/// Per-bin reciprocal of the temporal mean; 0 for bins whose mean is 0.
std::vector<double> alpha_weights(const FrameMatrix<double>& x);

/// instantaneous_kurtosis of alpha(k) * frame(k).
std::optional<double> weighted_instantaneous_kurtosis(std::span<const double> frame,
                                                      std::span<const double> alpha);

struct FrameKurtosisSeries {
  std::vector<double> values;  // 0 where invalid
  std::vector<bool> valid;

  std::size_t valid_count() const;
  /// Mean over valid frames, empty when there are none.
  std::optional<double> valid_mean() const;
};

FrameKurtosisSeries frame_kurtosis(const FrameMatrix<double>& x);
FrameKurtosisSeries weighted_frame_kurtosis(const FrameMatrix<double>& x,
                                            std::span<const double> alpha);

}  // namespace mnkurt

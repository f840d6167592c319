#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace mnkurt {

enum class MeasureId { DeltaKurt, DeltaKurtLim, DeltaKurtW, DeltaKurtPi };

inline constexpr std::array<MeasureId, 4> kAllMeasures = {
    MeasureId::DeltaKurt, MeasureId::DeltaKurtLim, MeasureId::DeltaKurtW,
    MeasureId::DeltaKurtPi};

/// "delta_kurt", "delta_kurt_lim", "delta_kurt_w", "delta_kurt_pi".
std::string_view to_string(MeasureId id);
std::optional<MeasureId> parse_measure_id(std::string_view name);

struct MeasureResult {
  MeasureId id = MeasureId::DeltaKurt;
  double raw = 0.0;
  double scaled = 0.0;  // in [0, 100]
  std::optional<std::size_t> selected_band;  // 0-based, set for delta_kurt_pi only
  std::size_t n_frames = 0;  // frames that entered the final average
  std::vector<double> frame_trace;  // NaN where a frame was not computable
};

}  // namespace mnkurt

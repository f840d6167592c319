#include "mnkurt/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mnkurt/error.hpp"
#include "mnkurt/kurtosis.hpp"

namespace mnkurt {

namespace {

void check_shapes(const PowerSpectrogram& nin, const PowerSpectrogram& nout) {
  if (nin.power.frames() != nout.power.frames() || nin.power.bins() != nout.power.bins()) {
    throw Error(ErrorCode::InvalidArgument,
                "spectrogram shapes differ: " + std::to_string(nin.power.frames()) + "x" +
                    std::to_string(nin.power.bins()) + " vs " +
                    std::to_string(nout.power.frames()) + "x" +
                    std::to_string(nout.power.bins()));
  }
}

MeasureResult log_ratio(MeasureId id, const FrameKurtosisSeries& in,
                        const FrameKurtosisSeries& out) {
  const auto mean_in = in.valid_mean();
  const auto mean_out = out.valid_mean();
  if (!mean_in || !mean_out) {
    throw Error(ErrorCode::NotComputable,
                std::string(to_string(id)) + ": no frame with non-zero spectral variance");
  }
  MeasureResult r;
  r.id = id;
  r.raw = std::log(*mean_out / *mean_in);
  r.n_frames = std::min(in.valid_count(), out.valid_count());
  r.frame_trace.resize(in.values.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t l = 0; l < in.values.size(); ++l) {
    if (in.valid[l] && out.valid[l]) r.frame_trace[l] = std::log(out.values[l] / in.values[l]);
  }
  return r;
}

}  // namespace

double rescale_clamped(double raw, double upper) {
  return std::clamp(raw, 0.0, upper) / upper * 100.0;
}

MeasureResult delta_kurt(const PowerSpectrogram& nin, const PowerSpectrogram& nout) {
  check_shapes(nin, nout);
  auto r = log_ratio(MeasureId::DeltaKurt, frame_kurtosis(nin.power), frame_kurtosis(nout.power));
  r.scaled = rescale_clamped(r.raw, kDeltaKurtUpper);
  return r;
}

MeasureResult delta_kurt_lim(const PowerSpectrogram& nin, const PowerSpectrogram& nout) {
  auto r = delta_kurt(nin, nout);
  r.id = MeasureId::DeltaKurtLim;
  r.raw = std::max(r.raw, 0.0);
  r.scaled = rescale_clamped(r.raw, kDeltaKurtUpper);
  return r;
}

MeasureResult delta_kurt_w(const PowerSpectrogram& nin, const PowerSpectrogram& nout) {
  check_shapes(nin, nout);
  const auto alpha_in = alpha_weights(nin.power);
  const auto alpha_out = alpha_weights(nout.power);
  auto r = log_ratio(MeasureId::DeltaKurtW, weighted_frame_kurtosis(nin.power, alpha_in),
                     weighted_frame_kurtosis(nout.power, alpha_out));
  r.scaled = rescale_clamped(r.raw, kDeltaKurtWUpper);
  return r;
}

}  // namespace mnkurt

#include "mnkurt/prepro.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mnkurt/error.hpp"

namespace mnkurt {

double a_weighting_db(double hz) {
  const double f2 = hz * hz;
  const double c1 = 20.598997 * 20.598997;
  const double c2 = 107.65265 * 107.65265;
  const double c3 = 737.86223 * 737.86223;
  const double c4 = 12194.217 * 12194.217;
  const double ra = c4 * f2 * f2 / ((f2 + c1) * std::sqrt((f2 + c2) * (f2 + c3)) * (f2 + c4));
  return 20.0 * std::log10(ra) + 2.0;
}

std::vector<double> a_weight_table(const StftConfig& cfg) {
  std::vector<double> table(cfg.num_bins());
  table[0] = kDcWeightDb;
  for (std::size_t k = 1; k < table.size(); ++k) table[k] = a_weighting_db(cfg.bin_hz(k));
  return table;
}

FrameMatrix<double> to_dba(const PowerSpectrogram& pow) {
  const auto weights = a_weight_table(pow.config);
  if (pow.power.bins() != weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "power spectrogram does not match its STFT config");
  }
  FrameMatrix<double> out(pow.power.frames(), pow.power.bins());
  for (std::size_t l = 0; l < out.frames(); ++l) {
    auto src = pow.power.frame(l);
    auto dst = out.frame(l);
    for (std::size_t k = 0; k < dst.size(); ++k) {
      dst[k] = 10.0 * std::log10(std::max(src[k], kPowerFloor)) + weights[k];
    }
  }
  return out;
}

Threshold compute_threshold(const FrameMatrix<double>& dba) {
  if (dba.empty()) throw Error(ErrorCode::InvalidArgument, "threshold of an empty spectrogram");
  // Mean of linear power, offset by the maximum for numerical range.
  const auto v = dba.values();
  const double peak = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double x : v) acc += std::pow(10.0, (x - peak) / 10.0);
  Threshold t;
  t.p_dba = peak + 10.0 * std::log10(acc / static_cast<double>(v.size()));
  t.thr = t.p_dba - kThresholdOffsetDb;
  return t;
}

FrameMatrix<double> limit_shift(const FrameMatrix<double>& dba, double thr) {
  FrameMatrix<double> out(dba.frames(), dba.bins());
  auto src = dba.values();
  auto dst = out.values();
  std::transform(src.begin(), src.end(), dst.begin(),
                 [thr](double x) { return std::max(x, thr) - thr; });
  return out;
}

PreprocessedPair discard_silent_frames(const FrameMatrix<double>& nin_plus,
                                       const FrameMatrix<double>& nout_plus,
                                       const Threshold& level) {
  if (nin_plus.frames() != nout_plus.frames() || nin_plus.bins() != nout_plus.bins()) {
    throw Error(ErrorCode::InvalidArgument, "input and output spectrograms differ in shape");
  }
  std::vector<std::size_t> kept;
  for (std::size_t l = 0; l < nout_plus.frames(); ++l) {
    auto row = nout_plus.frame(l);
    if (std::any_of(row.begin(), row.end(), [](double x) { return x > 0.0; })) kept.push_back(l);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyAfterPreprocessing,
                "every frame of the processed signal is below the threshold");
  }

  auto gather = [&](const FrameMatrix<double>& src) {
    PreprocessedSpectrogram out;
    out.values = FrameMatrix<double>(kept.size(), src.bins());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      auto s = src.frame(kept[i]);
      std::copy(s.begin(), s.end(), out.values.frame(i).begin());
    }
    out.kept_frames = kept;
    out.thr = level.thr;
    out.p_dba = level.p_dba;
    return out;
  };
  return {gather(nin_plus), gather(nout_plus)};
}

PreprocessedPair preprocess(const PowerSpectrogram& nin, const PowerSpectrogram& nout) {
  if (nin.frames() == 0 || nout.frames() == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty spectrogram");
  }
  const auto nin_dba = to_dba(nin);
  const auto nout_dba = to_dba(nout);
  const Threshold level = compute_threshold(nout_dba);
  return discard_silent_frames(limit_shift(nin_dba, level.thr),
                               limit_shift(nout_dba, level.thr), level);
}

SubBandLayout SubBandLayout::standard() {
  return SubBandLayout{{{50.0, 750.0}, {750.0, 6000.0}, {6000.0, 16000.0}}};
}

SubBandLayout SubBandLayout::from_edges(std::span<const double> edges_hz) {
  SubBandLayout layout;
  for (std::size_t i = 0; i + 1 < edges_hz.size(); ++i) {
    layout.bands.push_back({edges_hz[i], edges_hz[i + 1]});
  }
  layout.validate();
  return layout;
}

void SubBandLayout::validate() const {
  if (bands.empty()) throw Error(ErrorCode::InvalidArgument, "band layout is empty");
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (!(bands[i].low_hz >= 0.0 && bands[i].high_hz > bands[i].low_hz)) {
      throw Error(ErrorCode::InvalidArgument, "band " + std::to_string(i + 1) + " is empty");
    }
    if (i > 0 && bands[i].low_hz < bands[i - 1].high_hz) {
      throw Error(ErrorCode::InvalidArgument,
                  "bands must be ascending and non-overlapping");
    }
  }
}

std::vector<std::vector<std::size_t>> band_bins(const SubBandLayout& layout,
                                                const StftConfig& cfg) {
  layout.validate();
  std::vector<std::vector<std::size_t>> out(layout.bands.size());
  for (std::size_t b = 0; b < layout.bands.size(); ++b) {
    const Band& band = layout.bands[b];
    for (std::size_t k = 0; k < cfg.num_bins(); ++k) {
      const double f = cfg.bin_hz(k);
      if (f > band.low_hz && f <= band.high_hz) out[b].push_back(k);
    }
    if (out[b].size() < 2) {
      throw Error(ErrorCode::DegenerateBand,
                  "band " + std::to_string(b + 1) + " (" + std::to_string(band.low_hz) + ", " +
                      std::to_string(band.high_hz) + "] Hz holds fewer than two bins");
    }
  }
  return out;
}

}  // namespace mnkurt

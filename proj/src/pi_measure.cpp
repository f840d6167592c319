#include "mnkurt/pi_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mnkurt/error.hpp"
#include "mnkurt/kurtosis.hpp"

namespace mnkurt {

double band_energy_weight(std::span<const double> nout_plus_frame,
                          std::span<const std::size_t> bins) {
  if (bins.empty()) throw Error(ErrorCode::InvalidArgument, "energy weight of an empty band");
  double acc = 0.0;
  for (std::size_t k : bins) acc += std::pow(10.0, nout_plus_frame[k] / 10.0);
  return 10.0 * std::log10(acc / static_cast<double>(bins.size()));
}

std::optional<double> band_delta_kurt(std::span<const double> nin_plus_frame,
                                      std::span<const double> nout_plus_frame,
                                      std::span<const std::size_t> bins) {
  std::vector<double> in(bins.size());
  std::vector<double> out(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    in[i] = nin_plus_frame[bins[i]];
    out[i] = nout_plus_frame[bins[i]];
  }
  const auto k_in = instantaneous_kurtosis(in);
  const auto k_out = instantaneous_kurtosis(out);
  if (!k_in || !k_out) return std::nullopt;
  return std::min(std::abs(std::log(*k_out / *k_in)), kBandDeltaKurtLimit);
}

std::size_t BandAnalysis::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

BandAnalysis analyze_band(const PreprocessedPair& pre, std::span<const std::size_t> bins,
                          std::size_t band) {
  const auto& in = pre.nin.values;
  const auto& out = pre.nout.values;
  BandAnalysis a;
  a.band = band;
  a.dk_frames.assign(out.frames(), 0.0);
  a.weights.assign(out.frames(), 0.0);
  a.valid.assign(out.frames(), false);
  for (std::size_t l = 0; l < out.frames(); ++l) {
    a.weights[l] = band_energy_weight(out.frame(l), bins);
    const auto dk = band_delta_kurt(in.frame(l), out.frame(l), bins);
    if (!dk) continue;
    a.dk_frames[l] = *dk;
    a.valid[l] = true;
    a.selection_score += a.weights[l] * *dk;
    a.weight_sum += a.weights[l];
  }
  return a;
}

std::size_t select_band(std::span<const BandAnalysis> analyses) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < analyses.size(); ++i) {
    if (analyses[i].degenerate()) continue;
    if (!best || analyses[i].selection_score > analyses[*best].selection_score) best = i;
  }
  if (!best) {
    throw Error(ErrorCode::NotComputable,
                "delta_kurt_pi: no sub-band has weighted frames with defined kurtosis");
  }
  return *best;
}

MeasureResult delta_kurt_pi(const PowerSpectrogram& nin, const PowerSpectrogram& nout,
                            const SubBandLayout& layout) {
  if (nin.power.frames() != nout.power.frames() || nin.power.bins() != nout.power.bins()) {
    throw Error(ErrorCode::InvalidArgument, "spectrogram shapes differ");
  }
  const auto bins = band_bins(layout, nout.config);
  const auto pre = preprocess(nin, nout);

  std::vector<BandAnalysis> analyses;
  analyses.reserve(bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b) analyses.push_back(analyze_band(pre, bins[b], b));
  const std::size_t chosen = select_band(analyses);
  const BandAnalysis& a = analyses[chosen];

  MeasureResult r;
  r.id = MeasureId::DeltaKurtPi;
  r.raw = std::min(a.selection_score / a.weight_sum, kBandDeltaKurtLimit);
  r.scaled = std::clamp(r.raw / kBandDeltaKurtLimit * 100.0, 0.0, 100.0);
  r.selected_band = chosen;
  r.n_frames = a.valid_count();
  r.frame_trace.assign(nout.power.frames(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < a.dk_frames.size(); ++i) {
    if (a.valid[i]) r.frame_trace[pre.nout.kept_frames[i]] = a.dk_frames[i];
  }
  return r;
}

}  // namespace mnkurt

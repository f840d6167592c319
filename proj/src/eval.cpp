#include "mnkurt/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>

#include "mnkurt/error.hpp"

namespace mnkurt {

namespace {

void check_pairs(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::InvalidArgument, "paired sequences differ in length");
  }
  if (x.size() < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "correlation needs at least 3 pairs, got " + std::to_string(x.size()));
  }
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorCode::NotComputable, "Pearson correlation of a constant sequence");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double kendall(std::span<const double> x, std::span<const double> y) {
  check_pairs(x, y);
  // O(n^2) pair scan; n is a handful of listening-test items.
  long long s = 0;
  long long untied_x = 0;
  long long untied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = sign(x[i] - x[j]);
      const int sy = sign(y[i] - y[j]);
      s += sx * sy;
      untied_x += sx != 0;
      untied_y += sy != 0;
    }
  }
  if (untied_x == 0 || untied_y == 0) {
    throw Error(ErrorCode::NotComputable, "Kendall correlation of an all-tied sequence");
  }
  return static_cast<double>(s) /
         std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

void ResponseCurve::update_statistics() {
  const std::size_t levels = control.size();
  mean.assign(levels, 0.0);
  std.assign(levels, 0.0);
  if (per_item.empty()) return;
  const double n = static_cast<double>(per_item.size());
  for (std::size_t j = 0; j < levels; ++j) {
    double acc = 0.0;
    for (const auto& row : per_item) acc += row[j];
    mean[j] = acc / n;
    double var = 0.0;
    for (const auto& row : per_item) var += (row[j] - mean[j]) * (row[j] - mean[j]);
    std[j] = std::sqrt(var / n);
  }
}

double response_score(const ResponseCurve& curve) {
  if (curve.control.size() < 3 || curve.per_item.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "response score needs at least 3 levels and 2 items");
  }
  for (std::size_t j = 1; j < curve.control.size(); ++j) {
    if (!(curve.control[j] > curve.control[j - 1])) {
      throw Error(ErrorCode::InvalidArgument, "control levels must be strictly ascending");
    }
  }
  ResponseCurve c = curve;
  c.update_statistics();
  const auto [lo, hi] = std::minmax_element(c.mean.begin(), c.mean.end());
  const double span = (*hi - *lo) / 100.0;
  if (!(span > 0.0)) return 0.0;
  const double monotonicity = std::max(0.0, kendall(c.control, c.mean));
  const double mean_std =
      std::accumulate(c.std.begin(), c.std.end(), 0.0) / static_cast<double>(c.std.size());
  const double deviation = std::clamp(mean_std / 50.0, 0.0, 1.0);
  return monotonicity * span * (1.0 - deviation);
}

CorrelationReport correlate(std::span<const ScoredItem> items) {
  CorrelationReport report;
  std::vector<double> scores;
  std::vector<double> measures;
  for (const auto& item : items) {
    if (item.reference) {
      report.excluded.push_back(item.id);
      continue;
    }
    scores.push_back(item.score);
    measures.push_back(item.measure);
  }
  report.n = scores.size();
  report.pearson_r = pearson(scores, measures);
  report.kendall_t = kendall(scores, measures);
  return report;
}

std::map<MeasureId, ResponseCurve> run_response_experiment(std::span<const NamedAudio> items,
                                                           std::span<const double> levels,
                                                           std::span<const MeasureId> measures,
                                                           const ExperimentOptions& options) {
  if (items.empty()) throw Error(ErrorCode::InvalidArgument, "no items to evaluate");
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "no distortion levels");
  for (double p : levels) DistortionSpec{p, 0, options.scope}.validate();

  MeasureOptions mopt;
  mopt.stft = options.stft;
  mopt.bands = options.bands;
  mopt.channels = options.channels;

  // scaled[item][level][measure]; a failed item is remembered and dropped.
  std::vector<std::vector<std::vector<double>>> scaled(
      items.size(), std::vector<std::vector<double>>(levels.size(),
                                                     std::vector<double>(measures.size(), 0.0)));
  std::vector<std::optional<std::string>> failure(items.size());
  std::vector<std::optional<AudioBuffer>> inputs(items.size());
  std::vector<std::optional<AudioBuffer>> references(items.size());
  std::mutex failure_mutex;

  auto fail = [&](std::size_t i, const std::string& why) {
    std::lock_guard lock(failure_mutex);
    if (!failure[i]) failure[i] = why;
  };

  // Pass 1: resampled zero-distortion reference per item.
  auto prepare = [&](std::size_t i) {
    try {
      inputs[i] = to_analysis_rate(items[i].audio, options.stft.sample_rate);
      references[i] = distort_audio(*inputs[i], DistortionSpec{0.0, 0, options.scope}, options.stft);
    } catch (const std::exception& e) {
      fail(i, e.what());
    }
  };

  // Pass 2: one task per (item, level).
  auto evaluate = [&](std::size_t task) {
    const std::size_t i = task / levels.size();
    const std::size_t j = task % levels.size();
    if (!references[i]) return;
    try {
      const DistortionSpec spec{levels[j], SplitMix64(options.seed).split(i).next(),
                                options.scope};
      const AudioBuffer processed = distort_audio(*inputs[i], spec, options.stft);
      const auto outcomes = measure_audio(measures, *references[i], processed, mopt);
      for (std::size_t m = 0; m < outcomes.size(); ++m) {
        if (!outcomes[m].ok()) {
          fail(i, std::string(to_string(measures[m])) + " at " + std::to_string(levels[j]) +
                      "%: " + outcomes[m].reason);
          return;
        }
        scaled[i][j][m] = outcomes[m].result->scaled;
      }
    } catch (const std::exception& e) {
      fail(i, e.what());
    }
  };

  auto run_parallel = [&](std::size_t count, const auto& body) {
    const std::size_t workers = std::clamp<std::size_t>(options.jobs, 1, count);
    if (workers == 1) {
      for (std::size_t t = 0; t < count; ++t) body(t);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < count; t = next++) body(t);
      });
    }
  };

  run_parallel(items.size(), prepare);
  run_parallel(items.size() * levels.size(), evaluate);

  std::map<MeasureId, ResponseCurve> curves;
  for (std::size_t m = 0; m < measures.size(); ++m) {
    ResponseCurve& c = curves[measures[m]];
    c.measure = measures[m];
    c.control.assign(levels.begin(), levels.end());
  }
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (failure[i]) {
      if (options.warn) options.warn("skipping item '" + items[i].name + "': " + *failure[i]);
      continue;
    }
    for (std::size_t m = 0; m < measures.size(); ++m) {
      ResponseCurve& c = curves[measures[m]];
      c.items.push_back(items[i].name);
      std::vector<double> row(levels.size());
      for (std::size_t j = 0; j < levels.size(); ++j) row[j] = scaled[i][j][m];
      c.per_item.push_back(std::move(row));
    }
  }
  for (auto& [id, c] : curves) c.update_statistics();
  return curves;
}

ResponseCurve run_response_experiment(std::span<const NamedAudio> items,
                                      std::span<const double> levels, MeasureId measure,
                                      const ExperimentOptions& options) {
  const MeasureId ids[] = {measure};
  return run_response_experiment(items, levels, ids, options).at(measure);
}

}  // namespace mnkurt

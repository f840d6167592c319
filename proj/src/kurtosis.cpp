#include "mnkurt/kurtosis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mnkurt/error.hpp"

namespace mnkurt {

namespace {

// Spread below this fraction of the largest magnitude is rounding noise, not
// signal; treating it as variance would yield an arbitrary kurtosis.
constexpr double kRelativeSpreadFloor = 1e-12;

}  // namespace

std::optional<double> instantaneous_kurtosis(std::span<const double> frame) {
  if (frame.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "kurtosis needs at least two values");
  }
  const double n = static_cast<double>(frame.size());
  double sum = 0.0;
  double largest = 0.0;
  for (double x : frame) {
    sum += x;
    largest = std::max(largest, std::abs(x));
  }
  const double mean = sum / n;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : frame) {
    const double d = x - mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  if (!(m2 > 0.0) || std::sqrt(m2) <= kRelativeSpreadFloor * largest) return std::nullopt;
  return m4 / (m2 * m2);
}

std::vector<double> alpha_weights(const FrameMatrix<double>& x) {
  if (x.frames() == 0) throw Error(ErrorCode::InvalidArgument, "alpha weights need L >= 1");
  std::vector<double> mean(x.bins(), 0.0);
  for (std::size_t l = 0; l < x.frames(); ++l) {
    auto row = x.frame(l);
    for (std::size_t k = 0; k < row.size(); ++k) mean[k] += row[k];
  }
  const double frames = static_cast<double>(x.frames());
  for (double& m : mean) {
    m /= frames;
    m = m > 0.0 ? 1.0 / m : 0.0;
  }
  return mean;
}

std::optional<double> weighted_instantaneous_kurtosis(std::span<const double> frame,
                                                      std::span<const double> alpha) {
  if (frame.size() != alpha.size()) {
    throw Error(ErrorCode::InvalidArgument, "alpha weights do not match frame length");
  }
  std::vector<double> weighted(frame.size());
  std::transform(frame.begin(), frame.end(), alpha.begin(), weighted.begin(),
                 [](double x, double a) { return a * x; });
  return instantaneous_kurtosis(weighted);
}

std::size_t FrameKurtosisSeries::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

std::optional<double> FrameKurtosisSeries::valid_mean() const {
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (valid[i]) {
      acc += values[i];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return acc / static_cast<double>(n);
}

FrameKurtosisSeries frame_kurtosis(const FrameMatrix<double>& x) {
  FrameKurtosisSeries out;
  out.values.resize(x.frames(), 0.0);
  out.valid.resize(x.frames(), false);
  for (std::size_t l = 0; l < x.frames(); ++l) {
    if (auto k = instantaneous_kurtosis(x.frame(l))) {
      out.values[l] = *k;
      out.valid[l] = true;
    }
  }
  return out;
}

FrameKurtosisSeries weighted_frame_kurtosis(const FrameMatrix<double>& x,
                                            std::span<const double> alpha) {
  FrameKurtosisSeries out;
  out.values.resize(x.frames(), 0.0);
  out.valid.resize(x.frames(), false);
  for (std::size_t l = 0; l < x.frames(); ++l) {
    if (auto k = weighted_instantaneous_kurtosis(x.frame(l), alpha)) {
      out.values[l] = *k;
      out.valid[l] = true;
    }
  }
  return out;
}

}  // namespace mnkurt

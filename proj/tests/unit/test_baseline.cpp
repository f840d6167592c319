#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mnkurt/baseline.hpp"
#include "mnkurt/error.hpp"
#include "oracles.hpp"

using namespace mnkurt;

namespace {

PowerSpectrogram random_power(std::size_t frames, std::size_t bins, std::uint32_t seed,
                              double zero_fraction = 0.0) {
  std::mt19937 gen(seed);
  std::exponential_distribution<double> d(1.0);
  std::bernoulli_distribution hole(zero_fraction);
  StftConfig cfg = StftConfig::with_window((bins - 1));
  PowerSpectrogram p{FrameMatrix<double>(frames, bins), cfg};
  for (double& v : p.power.values()) v = hole(gen) ? 0.0 : d(gen);
  return p;
}

oracle::Grid to_grid(const PowerSpectrogram& p) {
  oracle::Grid g(p.frames());
  for (std::size_t l = 0; l < p.frames(); ++l) g[l].assign(p.power.frame(l).begin(), p.power.frame(l).end());
  return g;
}

// ln of the ratio of mean alpha-weighted kurtosis, each signal with its own
// alpha, written out with the naive oracle.
double naive_delta_kurt_w(const oracle::Grid& in, const oracle::Grid& out) {
  auto mean_weighted = [](const oracle::Grid& g) {
    std::vector<double> alpha(g.front().size(), 0.0);
    for (const auto& row : g) {
      for (std::size_t k = 0; k < row.size(); ++k) alpha[k] += row[k] / g.size();
    }
    for (double& a : alpha) a = a > 0 ? 1.0 / a : 0.0;
    double acc = 0;
    int n = 0;
    for (const auto& row : g) {
      if (auto v = oracle::weighted_kurtosis(row, alpha)) {
        acc += *v;
        ++n;
      }
    }
    return acc / n;
  };
  return std::log(mean_weighted(out) / mean_weighted(in));
}

}  // namespace

TEST_CASE("rescaling", "[baseline]") {
  CHECK(rescale_clamped(0.7, kDeltaKurtUpper) == Catch::Approx(50.0));
  CHECK(rescale_clamped(-0.3, kDeltaKurtUpper) == 0.0);
  CHECK(rescale_clamped(2.2, kDeltaKurtWUpper) == 100.0);
  CHECK(rescale_clamped(9.0, kDeltaKurtWUpper) == 100.0);
}

TEST_CASE("identity gives exactly zero", "[baseline]") {
  const auto p = random_power(20, 129, 1, 0.1);
  for (auto f : {delta_kurt, delta_kurt_lim, delta_kurt_w}) {
    const auto r = f(p, p);
    CHECK(r.raw == 0.0);
    CHECK(r.scaled == 0.0);
    CHECK_FALSE(r.selected_band);
  }
  CHECK(delta_kurt(p, p).id == MeasureId::DeltaKurt);
  CHECK(delta_kurt_lim(p, p).id == MeasureId::DeltaKurtLim);
  CHECK(delta_kurt_w(p, p).id == MeasureId::DeltaKurtW);
}

TEST_CASE("log ratio of mean kurtosis", "[baseline]") {
  const auto in = random_power(12, 65, 2);
  const auto out = random_power(12, 65, 3, 0.5);
  auto mean_kurt = [](const PowerSpectrogram& p) {
    double acc = 0;
    for (std::size_t l = 0; l < p.frames(); ++l) {
      std::vector<double> row(p.power.frame(l).begin(), p.power.frame(l).end());
      acc += *oracle::kurtosis(row);
    }
    return acc / p.frames();
  };
  const double expect = std::log(mean_kurt(out) / mean_kurt(in));
  const auto r = delta_kurt(in, out);
  CHECK(r.raw == Catch::Approx(expect).epsilon(1e-9));
  CHECK(r.raw > 0.0);  // holes raise the tail weight
  CHECK(r.scaled == Catch::Approx(rescale_clamped(expect, 1.4)));
  CHECK(r.n_frames == 12);
  CHECK(r.frame_trace.size() == 12);
}

TEST_CASE("antisymmetry and gain invariance", "[baseline]") {
  std::mt19937 gen(9);
  for (std::uint32_t s = 0; s < 10; ++s) {
    const auto a = random_power(8, 33, 100 + s);
    const auto b = random_power(8, 33, 200 + s, 0.3);
    CHECK(delta_kurt(a, b).raw == Catch::Approx(-delta_kurt(b, a).raw).margin(1e-9));
    auto b2 = b;
    for (double& v : b2.power.values()) v *= 17.0;
    CHECK(delta_kurt(a, b2).raw == Catch::Approx(delta_kurt(a, b).raw).margin(1e-9));
    CHECK(delta_kurt_w(a, b2).raw == Catch::Approx(delta_kurt_w(a, b).raw).margin(1e-9));
  }
}

TEST_CASE("lim variant never goes negative", "[baseline]") {
  const auto a = random_power(8, 33, 5, 0.4);
  const auto b = random_power(8, 33, 6);
  REQUIRE(delta_kurt(a, b).raw < 0.0);
  const auto r = delta_kurt_lim(a, b);
  CHECK(r.raw == 0.0);
  CHECK(r.scaled == 0.0);
  CHECK(delta_kurt_lim(b, a).raw == delta_kurt(b, a).raw);
}

TEST_CASE("weighted variant matches the naive pipeline", "[baseline]") {
  for (std::uint32_t s = 0; s < 10; ++s) {
    const auto a = random_power(10, 65, 300 + s);
    const auto b = random_power(10, 65, 400 + s, 0.25);
    const double expect = naive_delta_kurt_w(to_grid(a), to_grid(b));
    const auto r = delta_kurt_w(a, b);
    CHECK(std::abs(r.raw - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
    CHECK(r.scaled == Catch::Approx(rescale_clamped(expect, kDeltaKurtWUpper)));
  }
}

TEST_CASE("no valid frames", "[baseline]") {
  const auto a = random_power(4, 33, 1);
  PowerSpectrogram flat{FrameMatrix<double>(4, 33, 1.0), a.config};
  try {
    delta_kurt(a, flat);
    FAIL("expected NotComputable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotComputable);
  }
  CHECK_THROWS_AS(delta_kurt_w(flat, a), Error);
}

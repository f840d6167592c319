#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mnkurt/error.hpp"
#include "mnkurt/kurtosis.hpp"
#include "oracles.hpp"

using namespace mnkurt;

namespace {

bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("hand-evaluated kurtosis", "[kurtosis]") {
  const std::vector<double> spike = {0, 0, 0, 12};
  REQUIRE(instantaneous_kurtosis(spike));
  CHECK(*instantaneous_kurtosis(spike) == Catch::Approx(1701.0 / 729.0).epsilon(1e-15));

  const std::vector<double> ramp = {1, 2, 3, 4};
  CHECK(*instantaneous_kurtosis(ramp) == Catch::Approx(1.64).epsilon(1e-15));

  CHECK_FALSE(instantaneous_kurtosis(std::vector<double>{5, 5, 5, 5}));
  CHECK_FALSE(instantaneous_kurtosis(std::vector<double>{0, 0}));
  CHECK_THROWS_AS(instantaneous_kurtosis(std::vector<double>{1.0}), Error);
}

TEST_CASE("rounding-level spread counts as constant", "[kurtosis]") {
  std::vector<double> x(64, 0.1);
  x[5] = std::nextafter(0.1, 1.0);
  CHECK_FALSE(instantaneous_kurtosis(x));
}

TEST_CASE("alpha weights", "[kurtosis]") {
  FrameMatrix<double> x(2, 3);
  x(0, 0) = 4.0;
  x(1, 0) = 4.0;
  x(0, 2) = 1.0;
  x(1, 2) = 3.0;
  const auto alpha = alpha_weights(x);
  CHECK(alpha == std::vector<double>{0.25, 0.0, 0.5});
  CHECK_THROWS_AS(alpha_weights(FrameMatrix<double>{}), Error);
}

TEST_CASE("weighted kurtosis", "[kurtosis]") {
  const std::vector<double> frame = {2, 4};
  const std::vector<double> alpha = {0.5, 0.25};
  CHECK_FALSE(weighted_instantaneous_kurtosis(frame, alpha));

  const auto x = oracle::white_noise(64, 8, 1.0);
  CHECK(*weighted_instantaneous_kurtosis(x, std::vector<double>(64, 1.0)) ==
        *instantaneous_kurtosis(x));
  CHECK_THROWS_AS(weighted_instantaneous_kurtosis(x, std::vector<double>(3, 1.0)), Error);
}

TEST_CASE("random frames match the naive oracle", "[kurtosis]") {
  std::mt19937 gen(1234);
  std::uniform_int_distribution<std::size_t> len(4, 2048);
  std::exponential_distribution<double> power(1.0);
  std::uniform_real_distribution<double> weight(0.01, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = len(gen);
    std::vector<double> x(k), a(k);
    for (double& v : x) v = power(gen);
    for (double& v : a) v = weight(gen);
    const auto got = instantaneous_kurtosis(x);
    const auto want = oracle::kurtosis(x);
    REQUIRE(got.has_value() == want.has_value());
    CHECK(close_rel(*got, *want));
    CHECK(close_rel(*weighted_instantaneous_kurtosis(x, a), *oracle::weighted_kurtosis(x, a)));
  }
}

TEST_CASE("kurtosis invariances", "[kurtosis]") {
  std::mt19937 gen(77);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(257);
    for (double& v : x) v = d(gen);
    const double base = *instantaneous_kurtosis(x);
    CHECK(base >= 1.0);
    for (double c : {-3.0, 1e-3, 250.0}) {
      std::vector<double> y(x);
      for (double& v : y) v *= c;
      CHECK(close_rel(*instantaneous_kurtosis(y), base));
    }
    for (double s : {-5.0, 0.5, 40.0}) {
      std::vector<double> y(x);
      for (double& v : y) v += s;
      CHECK(close_rel(*instantaneous_kurtosis(y), base));
    }
  }
}

TEST_CASE("frame series", "[kurtosis]") {
  FrameMatrix<double> x(3, 4);
  x(0, 3) = 12.0;
  x(2, 0) = 1.0;
  x(2, 1) = 2.0;
  x(2, 2) = 3.0;
  x(2, 3) = 4.0;
  const auto s = frame_kurtosis(x);
  CHECK(s.valid == std::vector<bool>{true, false, true});
  CHECK(s.values[1] == 0.0);
  CHECK(s.valid_count() == 2);
  CHECK(*s.valid_mean() == Catch::Approx((1701.0 / 729.0 + 1.64) / 2));
  CHECK_FALSE(frame_kurtosis(FrameMatrix<double>(2, 4, 1.0)).valid_mean());

  const auto alpha = alpha_weights(x);
  const auto w = weighted_frame_kurtosis(x, alpha);
  REQUIRE(w.values.size() == 3);
  std::vector<double> row(x.frame(2).begin(), x.frame(2).end());
  CHECK(w.values[2] == Catch::Approx(*oracle::weighted_kurtosis(row, alpha)).epsilon(1e-12));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mnkurt/error.hpp"
#include "mnkurt/prepro.hpp"
#include "oracles.hpp"

using namespace mnkurt;
using Catch::Approx;

namespace {

PowerSpectrogram constant_power(std::size_t frames, double value) {
  return {FrameMatrix<double>(frames, StftConfig{}.num_bins(), value), StftConfig{}};
}

template <typename F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("A-weighting anchors", "[prepro]") {
  CHECK(std::abs(a_weighting_db(1000.0)) < 0.01);
  CHECK(a_weighting_db(100.0) == Approx(-19.1).margin(0.2));
  CHECK(a_weighting_db(10000.0) == Approx(-2.5).margin(0.2));
  for (double f : {31.5, 63.0, 250.0, 2000.0, 4000.0, 16000.0}) {
    CHECK(a_weighting_db(f) == Approx(oracle::a_weight(f)).margin(1e-9));
  }
  // Tabulated IEC value at a nominal frequency.
  CHECK(a_weighting_db(4000.0) == Approx(1.0).margin(0.1));
}

TEST_CASE("weight table by bin", "[prepro]") {
  const StftConfig cfg;
  const auto table = a_weight_table(cfg);
  REQUIRE(table.size() == 1025);
  CHECK(table[0] == kDcWeightDb);
  CHECK(table[32] == Approx(oracle::a_weight(750.0)).margin(1e-12));
}

TEST_CASE("dBA conversion", "[prepro]") {
  const StftConfig cfg;
  auto pow = constant_power(1, 1.0);
  const auto dba = to_dba(pow);
  const auto table = a_weight_table(cfg);
  for (std::size_t k = 0; k < 1025; ++k) CHECK(dba(0, k) == table[k]);
  CHECK(dba(0, 4) == Approx(oracle::a_weight(93.75)).margin(1e-9));

  pow.power(0, 7) = 0.0;
  const auto floored = to_dba(pow);
  CHECK(floored(0, 7) == Approx(-120.0 + table[7]).margin(1e-9));
  CHECK(std::isfinite(floored(0, 0)));
}

TEST_CASE("threshold from the energy mean", "[prepro]") {
  SECTION("constant level") {
    FrameMatrix<double> m(3, 5, 42.0);
    const auto t = compute_threshold(m);
    CHECK(t.p_dba == Approx(42.0).margin(1e-12));
    CHECK(t.thr == Approx(22.0).margin(1e-12));
  }
  SECTION("two bins 0 and 20 dBA") {
    FrameMatrix<double> m(1, 2);
    m(0, 1) = 20.0;
    const auto t = compute_threshold(m);
    CHECK(t.p_dba == Approx(10 * std::log10(50.5)).epsilon(1e-12));
    CHECK(t.p_dba == Approx(17.03).margin(0.005));
    CHECK(t.thr == Approx(-2.97).margin(0.005));
  }
  SECTION("floored silence") {
    const auto dba = to_dba(constant_power(2, 0.0));
    const auto t = compute_threshold(dba);
    CHECK(std::isfinite(t.p_dba));
    CHECK(t.thr == Approx(t.p_dba - 20.0));
  }
  SECTION("very loud values do not overflow") {
    FrameMatrix<double> m(1, 2, 4000.0);
    CHECK(compute_threshold(m).p_dba == Approx(4000.0));
  }
}

TEST_CASE("limit and shift", "[prepro]") {
  FrameMatrix<double> m(1, 3);
  m(0, 0) = 5.0;
  m(0, 1) = 15.0;
  m(0, 2) = 10.0;
  const auto out = limit_shift(m, 10.0);
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == 5.0);
  CHECK(out(0, 2) == 0.0);
}

TEST_CASE("silent frames are dropped from both signals", "[prepro]") {
  FrameMatrix<double> nin(5, 3, 1.0), nout(5, 3, 2.0);
  const Threshold level{10.0, -10.0};
  SECTION("nothing silent") {
    const auto p = discard_silent_frames(nin, nout, level);
    CHECK(p.nin.values == nin);
    CHECK(p.nout.values == nout);
    CHECK(p.nout.kept_frames == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(p.nin.thr == -10.0);
  }
  SECTION("processed frame 3 silent") {
    for (double& v : nout.frame(3)) v = 0.0;
    nin(1, 0) = 0.0;
    const auto p = discard_silent_frames(nin, nout, level);
    CHECK(p.nin.values.frames() == 4);
    CHECK(p.nout.kept_frames == std::vector<std::size_t>{0, 1, 2, 4});
    CHECK(p.nin.kept_frames == p.nout.kept_frames);
    CHECK(p.nin.values(1, 0) == 0.0);
  }
  SECTION("input silence alone does not drop a frame") {
    for (double& v : nin.frame(2)) v = 0.0;
    CHECK(discard_silent_frames(nin, nout, level).nin.values.frames() == 5);
  }
  SECTION("everything silent") {
    FrameMatrix<double> zero(5, 3, 0.0);
    expect_code(ErrorCode::EmptyAfterPreprocessing, [&] { discard_silent_frames(nin, zero, level); });
  }
}

TEST_CASE("preprocess chain", "[prepro]") {
  std::mt19937 gen(3);
  std::exponential_distribution<double> d(1.0);
  PowerSpectrogram a = constant_power(6, 0.0), b = constant_power(6, 0.0);
  for (double& v : a.power.values()) v = d(gen);
  for (double& v : b.power.values()) v = d(gen);

  const auto p = preprocess(a, b);
  CHECK(p.nin.thr == p.nout.thr);
  CHECK(p.nout.thr == Approx(p.nout.p_dba - 20.0));
  CHECK(p.nout.p_dba == compute_threshold(to_dba(b)).p_dba);
  for (double v : p.nin.values.values()) CHECK(v >= 0.0);
  for (double v : p.nout.values.values()) CHECK(v >= 0.0);

  SECTION("a common gain cancels") {
    // +10 dB on both signals moves the threshold by exactly 10 dB.
    PowerSpectrogram a10 = a, b10 = b;
    for (double& v : a10.power.values()) v *= 10.0;
    for (double& v : b10.power.values()) v *= 10.0;
    const auto q = preprocess(a10, b10);
    REQUIRE(q.nout.values.frames() == p.nout.values.frames());
    for (std::size_t i = 0; i < q.nout.values.values().size(); ++i) {
      CHECK(q.nout.values.values()[i] == Approx(p.nout.values.values()[i]).margin(1e-9));
      CHECK(q.nin.values.values()[i] == Approx(p.nin.values.values()[i]).margin(1e-9));
    }
  }
  SECTION("floored silence keeps its frames") {
    // The loudest bin of a frame never falls 20 dB below the energy mean.
    CHECK(preprocess(a, constant_power(6, 0.0)).nout.values.frames() == 6);
  }
}

TEST_CASE("band bins", "[prepro]") {
  const StftConfig cfg;
  const auto layout = SubBandLayout::standard();
  const auto bins = band_bins(layout, cfg);
  REQUIRE(bins.size() == 3);
  // k=2 is 46.875 Hz, k=3 is 70.3 Hz; k=32 is exactly 750 Hz.
  CHECK(bins[0].front() == 3);
  CHECK(bins[0].back() == 32);
  CHECK(bins[1].front() == 33);
  CHECK(bins[1].back() == 256);
  CHECK(bins[1].size() == 224);
  CHECK(bins[2].front() == 257);
  CHECK(bins[2].back() == 682);
  for (const auto& b : bins) {
    for (std::size_t k : b) CHECK(k != 1);
  }
  // Oracle: enumerate f_k directly.
  for (std::size_t b = 0; b < 3; ++b) {
    const auto& band = layout.bands[b];
    std::vector<std::size_t> expect;
    for (std::size_t k = 0; k < 1025; ++k) {
      const double f = k * 48000.0 / 2048.0;
      if (f > band.low_hz && f <= band.high_hz) expect.push_back(k);
    }
    CHECK(bins[b] == expect);
  }
}

TEST_CASE("band layout validation", "[prepro]") {
  const double edges[] = {100.0, 1000.0, 8000.0};
  const auto layout = SubBandLayout::from_edges(edges);
  REQUIRE(layout.bands.size() == 2);
  CHECK(layout.bands[1] == Band{1000.0, 8000.0});

  CHECK_THROWS_AS((SubBandLayout{{{500.0, 400.0}}}.validate()), Error);
  CHECK_THROWS_AS((SubBandLayout{{{100.0, 800.0}, {700.0, 900.0}}}.validate()), Error);
  CHECK_THROWS_AS(SubBandLayout{}.validate(), Error);

  // One bin is not a band.
  expect_code(ErrorCode::DegenerateBand,
              [] { band_bins(SubBandLayout{{{740.0, 760.0}}}, StftConfig{}); });
}

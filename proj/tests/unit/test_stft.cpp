#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "mnkurt/error.hpp"
#include "mnkurt/stft.hpp"
#include "mnkurt/synth.hpp"
#include "oracles.hpp"

using namespace mnkurt;

namespace {

double interior_error_db(const std::vector<double>& x, const std::vector<double>& y,
                         std::size_t margin) {
  double err = 0, ref = 0;
  for (std::size_t i = margin; i + margin < y.size(); ++i) {
    err += std::pow(y[i] - x[i], 2);
    ref += x[i] * x[i];
  }
  return 10 * std::log10(err / ref);
}

}  // namespace

TEST_CASE("config geometry", "[stft]") {
  const StftConfig cfg;
  CHECK(cfg.num_bins() == 1025);
  CHECK(cfg.bin_hz(32) == 750.0);
  CHECK(cfg.num_frames(1023) == 0);
  CHECK(cfg.num_frames(1024) == 1);
  CHECK(cfg.num_frames(1535) == 1);
  CHECK(cfg.num_frames(1536) == 2);
  CHECK(cfg.span_samples(3) == 2048);
  CHECK(StftConfig::with_window(512) == StftConfig{512, 256, 1024, 48000});
  CHECK_THROWS_AS(StftConfig::with_window(1000).validate(), Error);
  CHECK_THROWS_AS((StftConfig{1024, 256, 2048, 48000}.validate()), Error);
}

TEST_CASE("sine window", "[stft]") {
  const auto w = sine_window(1024);
  CHECK(w[0] == Catch::Approx(std::sin(std::numbers::pi * 0.5 / 1024)));
  CHECK(w[511] == w[512]);
  // Power-complementary at 50 % overlap.
  for (std::size_t n = 0; n < 512; ++n) CHECK(std::abs(w[n] * w[n] + w[n + 512] * w[n + 512] - 1.0) < 1e-12);
}

TEST_CASE("DC frame puts the window sum in bin 0", "[stft]") {
  const auto spec = analyze(std::vector<double>(1024, 1.0), StftConfig{});
  REQUIRE(spec.frames() == 1);
  double sum = 0;
  for (double v : sine_window(1024)) sum += v;
  CHECK(sum == Catch::Approx(651.9).margin(0.05));
  CHECK(std::abs(spec.bins(0, 0)) == Catch::Approx(sum).epsilon(1e-12));
}

TEST_CASE("silence gives all-zero bins", "[stft]") {
  const auto spec = analyze(std::vector<double>(4096, 0.0), StftConfig{});
  for (auto v : spec.bins.values()) CHECK(v == std::complex<double>(0, 0));
  CHECK(spec.frames() == 7);
  for (double v : synthesize_samples(spec)) CHECK(v == 0.0);
}

TEST_CASE("bin-centred tone matches a naive DFT", "[stft]") {
  const double f = 500.0 * 48000 / 2048;
  std::vector<double> x(1024);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = 0.5 * std::sin(2 * std::numbers::pi * f * n / 48000);
  const auto spec = analyze(x, StftConfig{});
  const auto w = sine_window(1024);
  std::vector<double> windowed(1024);
  for (std::size_t n = 0; n < 1024; ++n) windowed[n] = x[n] * w[n];
  const auto ref = oracle::dft(windowed, 2048);
  double peak = 0;
  std::size_t arg = 0;
  for (std::size_t k = 0; k < 1025; ++k) {
    CHECK(std::abs(spec.bins(0, k) - ref[k]) < 1e-9 * 256);
    if (std::abs(spec.bins(0, k)) > peak) {
      peak = std::abs(spec.bins(0, k));
      arg = k;
    }
  }
  CHECK(arg == 500);
}

TEST_CASE("power is squared magnitude", "[stft]") {
  ComplexSpectrogram spec{FrameMatrix<std::complex<double>>(2, 3), StftConfig{}};
  spec.bins(0, 1) = {3, 4};
  const auto p = power(spec);
  CHECK(p.power(0, 1) == 25.0);
  CHECK(p.power(1, 0) == 0.0);
  CHECK(p.power(1, 2) == 0.0);
}

TEST_CASE("round trip reconstructs the interior", "[stft]") {
  const StftConfig cfg;
  SECTION("white noise") {
    const auto x = oracle::white_noise(48000, 11);
    const auto y = synthesize_samples(analyze(x, cfg));
    REQUIRE(y.size() == cfg.span_samples(cfg.num_frames(x.size())));
    CHECK(interior_error_db(x, y, cfg.hop) < -60.0);
  }
  SECTION("speech-like") {
    const auto x = synth::speech_like(2.0, 48000, 5);
    const auto y = synthesize_samples(analyze(x, cfg));
    CHECK(interior_error_db(x, y, cfg.hop) < -60.0);
  }
  SECTION("other window lengths") {
    for (std::size_t n : {256u, 512u, 2048u}) {
      const auto c = StftConfig::with_window(n);
      const auto x = oracle::white_noise(20000, 12);
      CHECK(interior_error_db(x, synthesize_samples(analyze(x, c)), c.hop) < -60.0);
    }
  }
}

TEST_CASE("overlap-add of the squared window is flat", "[stft]") {
  // A constant 1 through analysis and synthesis must give 1 in the interior.
  const StftConfig cfg;
  const auto y = synthesize_samples(analyze(std::vector<double>(10 * 512 + 512, 1.0), cfg));
  for (std::size_t i = cfg.hop; i + cfg.hop < y.size(); ++i) CHECK(std::abs(y[i] - 1.0) < 1e-9);
}

TEST_CASE("synthesis is linear and deterministic", "[stft]") {
  const StftConfig cfg;
  auto spec = analyze(oracle::white_noise(8192, 4), cfg);
  const auto base = synthesize_samples(spec);
  CHECK(synthesize_samples(spec) == base);
  for (auto& v : spec.bins.values()) v *= -2.5;
  const auto scaled = synthesize_samples(spec);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK(std::abs(scaled[i] + 2.5 * base[i]) <= 1e-9 * std::max(1.0, std::abs(scaled[i])));
  }
  CHECK(analyze(oracle::white_noise(8192, 4), cfg).bins == analyze(oracle::white_noise(8192, 4), cfg).bins);
}

TEST_CASE("analysis input checks", "[stft]") {
  const StftConfig cfg;
  try {
    analyze(std::vector<double>(1000, 0.1), cfg);
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooShort);
  }
  AudioBuffer stereo;
  stereo.channels = {std::vector<double>(2048), std::vector<double>(2048)};
  CHECK_THROWS_AS(analyze(stereo, cfg), Error);
  CHECK_THROWS_AS(analyze(AudioBuffer::mono(std::vector<double>(2048), 44100), cfg), Error);
  const auto out = synthesize(analyze(AudioBuffer::mono(std::vector<double>(2048, 0.25)), cfg));
  CHECK(out.sample_rate == 48000);
  CHECK(out.num_frames() == 2048);
}

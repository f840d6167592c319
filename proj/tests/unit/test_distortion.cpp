#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "mnkurt/distortion.hpp"
#include "mnkurt/error.hpp"
#include "mnkurt/synth.hpp"
#include "oracles.hpp"

using namespace mnkurt;

namespace {

std::size_t count_true(const std::vector<bool>& m) {
  return static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
}

double rms(const std::vector<double>& x) {
  double acc = 0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / x.size());
}

}  // namespace

TEST_CASE("SplitMix64 reference output", "[distortion]") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFull);
  CHECK(g.next() == 0x6E789E6AA1B965F4ull);
  SplitMix64 h(1234567);
  CHECK(h.next() == 6457827717110365317ull);

  SplitMix64 r(42);
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
  CHECK(r.below(1) == 0);

  const SplitMix64 root(9);
  CHECK(root.split(0).next() == root.split(0).next());
  CHECK(root.split(0).next() != root.split(1).next());
}

TEST_CASE("mask cardinality is exact", "[distortion]") {
  CHECK(zeroed_count(99.8, 1000) == 998);
  CHECK(zeroed_count(0.0, 1000) == 0);
  CHECK(zeroed_count(50.0, 3) == 2);  // 1.5 rounds away from zero
  for (double p : {0.0, 1.0, 10.0, 33.3, 50.0, 75.0, 99.8}) {
    const auto m = zero_mask(10, 100, {p, 7, MaskScope::Global});
    CHECK(count_true(m) == zeroed_count(p, 1000));
  }
  const auto per_frame = zero_mask(10, 100, {25.0, 7, MaskScope::PerFrame});
  for (std::size_t l = 0; l < 10; ++l) {
    CHECK(std::count(per_frame.begin() + l * 100, per_frame.begin() + (l + 1) * 100, true) == 25);
  }
}

TEST_CASE("mask determinism", "[distortion]") {
  const DistortionSpec a{40.0, 1, MaskScope::Global};
  CHECK(zero_mask(20, 50, a) == zero_mask(20, 50, a));
  CHECK(zero_mask(20, 50, a) != zero_mask(20, 50, {40.0, 2, MaskScope::Global}));
  CHECK(zero_mask(20, 50, {40.0, 1, MaskScope::PerFrame}) != zero_mask(20, 50, a));
}

TEST_CASE("masks with one seed are nested across percentages", "[distortion]") {
  std::vector<bool> prev(2000, false);
  for (double p : {0.0, 10.0, 25.0, 50.0, 75.0, 90.0, 99.8}) {
    const auto m = zero_mask(20, 100, {p, 99, MaskScope::Global});
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (prev[i]) CHECK(m[i]);
    }
    prev = m;
  }
}

TEST_CASE("percent range is enforced", "[distortion]") {
  CHECK_THROWS_AS(zero_mask(2, 2, {100.0, 0, MaskScope::Global}), Error);
  CHECK_THROWS_AS(zero_mask(2, 2, {-1.0, 0, MaskScope::Global}), Error);
}

TEST_CASE("zeroing a spectrogram", "[distortion]") {
  const StftConfig cfg;
  const auto spec = analyze(oracle::white_noise(6000, 3), cfg);
  CHECK(zero_bins(spec, {0.0, 5, MaskScope::Global}).bins == spec.bins);

  const auto half = zero_bins(spec, {50.0, 5, MaskScope::Global});
  const auto mask = zero_mask(spec.frames(), cfg.num_bins(), {50.0, 5, MaskScope::Global});
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) {
      CHECK(half.bins.values()[i] == std::complex<double>(0, 0));
    } else {
      CHECK(half.bins.values()[i] == spec.bins.values()[i]);
    }
  }

  // 99.8 % of 100 bins rounds to all of them.
  ComplexSpectrogram tiny{FrameMatrix<std::complex<double>>(1, 100, {1.0, 1.0}), cfg};
  const auto cleared = zero_bins(tiny, {99.8, 1, MaskScope::Global});
  for (auto v : cleared.bins.values()) CHECK(v == std::complex<double>(0, 0));
}

TEST_CASE("distorting audio", "[distortion]") {
  const StftConfig cfg;
  const auto harp = synth::harp_arpeggio(2.0);

  SECTION("0 % is the plain round trip") {
    const auto out = distort_audio(harp, {0.0, 3, MaskScope::Global}, cfg);
    CHECK(out.channels[0] == synthesize_samples(analyze(harp.channels[0], cfg)));
    CHECK(out.num_frames() == cfg.span_samples(cfg.num_frames(harp.num_frames())));
  }

  SECTION("deterministic and energy decreasing") {
    double prev = 1e9;
    for (double p : {0.0, 25.0, 50.0, 90.0, 99.8}) {
      const auto out = distort_audio(harp, {p, 3, MaskScope::Global}, cfg);
      CHECK(out == distort_audio(harp, {p, 3, MaskScope::Global}, cfg));
      const double level = rms(out.channels[0]);
      CHECK(level <= prev + 1e-12);
      prev = level;
    }
    CHECK(prev < 0.1 * rms(harp.channels[0]));
  }

  SECTION("stereo channels get independent masks") {
    AudioBuffer st;
    st.channels = {harp.channels[0], harp.channels[0]};
    const auto out = distort_audio(st, {50.0, 3, MaskScope::Global}, cfg);
    CHECK(out.channels[0] != out.channels[1]);
    // Channel 0 draws its mask from sub-seed 0.
    const auto spec = analyze(harp.channels[0], cfg);
    DistortionSpec sub{50.0, SplitMix64(3).split(0).next(), MaskScope::Global};
    CHECK(out.channels[0] == synthesize_samples(zero_bins(spec, sub)));
  }

  SECTION("rate must match") {
    CHECK_THROWS_AS(distort_audio(AudioBuffer::mono(std::vector<double>(4096), 44100),
                                  {10.0, 1, MaskScope::Global}, cfg),
                    Error);
  }

  SECTION("too short") {
    try {
      distort_audio(AudioBuffer::mono(std::vector<double>(100)), {10.0, 1, MaskScope::Global}, cfg);
      FAIL("expected TooShort");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooShort);
    }
  }
}

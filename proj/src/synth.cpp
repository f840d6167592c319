#include "mnkurt/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <numbers>
#include <string>

#include "mnkurt/distortion.hpp"

namespace mnkurt::synth {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Noise {
 public:
  explicit Noise(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_.next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    return r * std::cos(kTwoPi * u2);
  }

 private:
  SplitMix64 rng_;
  std::optional<double> spare_;
};

/// RBJ band-pass with 0 dB peak gain.
class BandPass {
 public:
  void tune(double hz, double q, int rate) {
    const double w0 = kTwoPi * hz / rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    b0_ = alpha / a0;
    b2_ = -alpha / a0;
    a1_ = -2.0 * std::cos(w0) / a0;
    a2_ = (1.0 - alpha) / a0;
  }

  double operator()(double x) {
    const double y = b0_ * x + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = x;
    y2_ = y1_;
    y1_ = y;
    return y;
  }

 private:
  double b0_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
  double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
};

std::size_t length(double seconds, int rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(x.size()));
}

void normalize_peak(std::vector<std::vector<double>>& channels, double peak) {
  double m = 0.0;
  for (const auto& ch : channels) {
    for (double v : ch) m = std::max(m, std::abs(v));
  }
  if (m == 0.0) return;
  for (auto& ch : channels) {
    for (double& v : ch) v *= peak / m;
  }
}

double midi_hz(double note) { return 440.0 * std::pow(2.0, (note - 69.0) / 12.0); }

/// Adds a decaying harmonic tone starting at sample `start`.
void add_pluck(std::vector<double>& out, std::size_t start, double f0, double amp, int rate,
               Noise& noise) {
  constexpr double kInharmonicity = 1e-4;
  const double nyquist_guard = 0.45 * rate;
  for (int h = 1; h <= 12; ++h) {
    const double f = h * f0 * std::sqrt(1.0 + kInharmonicity * h * h);
    if (f >= std::min(16000.0, nyquist_guard)) break;
    const double a = amp * std::pow(double(h), -1.5) * noise.uniform(0.6, 1.0);
    const double tau = 1.2 / (1.0 + 0.6 * (h - 1));
    const auto n = std::min(out.size() - std::min(out.size(), start),
                            static_cast<std::size_t>(tau * 7.0 * rate));
    const std::complex<double> step =
        std::polar(std::exp(-1.0 / (tau * rate)), kTwoPi * f / rate);
    std::complex<double> z = std::polar(a, noise.uniform(0.0, kTwoPi));
    const double attack = 0.004 * rate;
    for (std::size_t i = 0; i < n; ++i) {
      const double env = i < attack ? static_cast<double>(i) / attack : 1.0;
      out[start + i] += env * z.imag();
      z *= step;
    }
  }
}

}  // namespace

AudioBuffer harp_arpeggio(double seconds, int rate, std::uint64_t seed, double note_interval) {
  static constexpr std::array<double, 10> kNotes = {48, 52, 55, 60, 64, 67, 72, 76, 79, 84};
  Noise noise(seed);
  std::vector<double> out(length(seconds, rate), 0.0);
  const auto step = static_cast<std::size_t>(note_interval * rate);
  // Up and down the chord: 0 1 .. 9 8 .. 1 0 1 ..
  const std::size_t cycle = 2 * (kNotes.size() - 1);
  for (std::size_t onset = 0, i = 0; onset < out.size(); onset += step, ++i) {
    const std::size_t pos = i % cycle;
    const std::size_t idx = pos < kNotes.size() ? pos : cycle - pos;
    add_pluck(out, onset, midi_hz(kNotes[idx]), noise.uniform(0.6, 1.0), rate, noise);
  }
  std::vector<std::vector<double>> channels{std::move(out)};
  normalize_peak(channels, 0.5);
  return AudioBuffer::mono(std::move(channels.front()), rate);
}

std::vector<double> speech_like(double seconds, int rate, std::uint64_t seed) {
  struct Vowel {
    double f1, f2, f3;
  };
  static constexpr std::array<Vowel, 5> kVowels = {
      {{730, 1090, 2440}, {270, 2290, 3010}, {300, 870, 2240}, {530, 1840, 2480},
       {570, 840, 2410}}};
  Noise noise(seed);
  std::vector<double> out(length(seconds, rate), 0.0);
  const double f0_base = noise.uniform(95.0, 210.0);

  std::size_t t = static_cast<std::size_t>(noise.uniform(0.0, 0.3) * rate);
  int syllable = 0;
  double phase = 0.0;
  while (t < out.size()) {
    const auto dur = static_cast<std::size_t>(noise.uniform(0.12, 0.32) * rate);
    const bool voiced = noise.uniform() < 0.8;
    const Vowel v = kVowels[static_cast<std::size_t>(noise.uniform() * kVowels.size()) % 5];
    const double amp = noise.uniform(0.5, 1.0);
    std::array<BandPass, 3> formants;
    const std::array<double, 3> freqs = {v.f1, v.f2, v.f3};
    const std::array<double, 3> gains = {1.0, 0.6, 0.3};
    for (std::size_t f = 0; f < 3; ++f) formants[f].tune(freqs[f], freqs[f] / 90.0, rate);
    BandPass hiss;
    hiss.tune(noise.uniform(3500.0, 7000.0), 2.0, rate);

    for (std::size_t i = 0; i < dur && t + i < out.size(); ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(dur);
      const double env = amp * std::sin(std::numbers::pi * x);
      double s;
      if (voiced) {
        const double time = static_cast<double>(t + i) / rate;
        const double f0 = f0_base * (1.0 + 0.12 * std::sin(kTwoPi * 0.6 * time) - 0.1 * x);
        phase += f0 / rate;
        const double pulse = phase >= 1.0 ? 1.0 : 0.0;
        if (phase >= 1.0) phase -= 1.0;
        s = 0.0;
        for (std::size_t f = 0; f < 3; ++f) s += gains[f] * formants[f](pulse);
        s *= 8.0;
      } else {
        s = 0.3 * hiss(noise.gaussian());
      }
      out[t + i] += env * s;
    }
    t += dur;
    ++syllable;
    const double gap = (syllable % 5 == 0) ? noise.uniform(0.25, 0.6) : noise.uniform(0.03, 0.12);
    t += static_cast<std::size_t>(gap * rate);
  }
  return out;
}

std::vector<double> pink_noise(double seconds, int rate, std::uint64_t seed) {
  Noise noise(seed);
  std::vector<double> out(length(seconds, rate));
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  const double mod_rate = noise.uniform(0.1, 0.3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = noise.gaussian();
    b0 = 0.99765 * b0 + w * 0.0990460;
    b1 = 0.96300 * b1 + w * 0.2965164;
    b2 = 0.57000 * b2 + w * 1.0526913;
    const double level = 1.0 + 0.4 * std::sin(kTwoPi * mod_rate * i / rate);
    out[i] = level * (b0 + b1 + b2 + w * 0.1848) * 0.05;
  }
  return out;
}

std::vector<double> chord_pad(double seconds, int rate, std::uint64_t seed) {
  static constexpr std::array<std::array<double, 4>, 4> kChords = {
      {{48, 55, 64, 67}, {45, 52, 60, 64}, {41, 48, 57, 65}, {43, 50, 59, 67}}};
  Noise noise(seed);
  std::vector<double> out(length(seconds, rate), 0.0);
  const auto chord_len = static_cast<std::size_t>(2.0 * rate);
  const auto fade = static_cast<std::size_t>(0.1 * rate);
  for (std::size_t start = 0, c = 0; start < out.size(); start += chord_len, ++c) {
    const auto& chord = kChords[c % kChords.size()];
    const std::size_t end = std::min(out.size(), start + chord_len + fade);
    for (double note : chord) {
      const double f0 = midi_hz(note) * (1.0 + noise.uniform(-0.002, 0.002));
      const double trem = noise.uniform(4.0, 6.0);
      for (int h = 1; h <= 8; ++h) {
        if (h * f0 > 12000.0) break;
        const double a = 0.1 / h;
        const std::complex<double> step = std::polar(1.0, kTwoPi * h * f0 / rate);
        std::complex<double> z = std::polar(a, noise.uniform(0.0, kTwoPi));
        for (std::size_t i = start; i < end; ++i) {
          const std::size_t k = i - start;
          double env = 1.0;
          if (k < fade) env = static_cast<double>(k) / fade;
          if (end - i < fade) env = std::min(env, static_cast<double>(end - i) / fade);
          const double time = static_cast<double>(i) / rate;
          out[i] += env * (1.0 + 0.15 * std::sin(kTwoPi * trem * time)) * z.imag();
          z *= step;
        }
      }
    }
  }
  return out;
}

std::vector<double> rain(double seconds, int rate, std::uint64_t seed) {
  Noise noise(seed);
  std::vector<double> out = pink_noise(seconds, rate, seed ^ 0x5eedull);
  for (double& v : out) v *= 0.1;
  const double drops_per_second = 150.0;
  double t = 0.0;
  for (;;) {
    t += -std::log(1.0 - noise.uniform()) / drops_per_second;
    const auto start = static_cast<std::size_t>(t * rate);
    if (start >= out.size()) break;
    const double f = noise.uniform(1500.0, 9000.0);
    const double tau = noise.uniform(0.001, 0.004);
    const double amp = 0.2 * noise.uniform() * noise.uniform();
    const std::complex<double> step = std::polar(std::exp(-1.0 / (tau * rate)), kTwoPi * f / rate);
    std::complex<double> z = std::polar(amp, noise.uniform(0.0, kTwoPi));
    const auto n = std::min(out.size() - start, static_cast<std::size_t>(6.0 * tau * rate));
    for (std::size_t i = 0; i < n; ++i) {
      out[start + i] += z.imag();
      z *= step;
    }
  }
  return out;
}

namespace {

std::vector<double> background(Background bg, double seconds, int rate, std::uint64_t seed) {
  switch (bg) {
    case Background::Music: return chord_pad(seconds, rate, seed);
    case Background::Pink: return pink_noise(seconds, rate, seed);
    case Background::Rain: return rain(seconds, rate, seed);
    case Background::Harp: return harp_arpeggio(seconds, rate, seed, 0.3).channels.front();
    case Background::Babble: {
      std::vector<double> out(length(seconds, rate), 0.0);
      for (std::uint64_t v = 0; v < 4; ++v) {
        const auto voice = speech_like(seconds, rate, seed * 31 + v);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += 0.5 * voice[i];
      }
      return out;
    }
  }
  return {};
}

bool tonal(Background bg) { return bg == Background::Music || bg == Background::Harp; }

}  // namespace

AudioBuffer mixture(Background bg, double snr_db, double seconds, int rate, std::uint64_t seed) {
  const SplitMix64 root(seed);
  std::vector<double> left = background(bg, seconds, rate, root.split(0).next());
  std::vector<double> right;
  if (tonal(bg)) {
    // Same source, wider image: slight delay and level difference.
    const auto delay = static_cast<std::size_t>(0.003 * rate);
    right.assign(left.size(), 0.0);
    for (std::size_t i = delay; i < left.size(); ++i) right[i] = 0.85 * left[i - delay];
  } else {
    right = background(bg, seconds, rate, root.split(1).next());
  }
  const auto voice = speech_like(seconds, rate, root.split(2).next());
  const double bg_rms = 0.5 * (rms(left) + rms(right));
  const double gain = bg_rms > 0.0 ? bg_rms * std::pow(10.0, snr_db / 20.0) / rms(voice) : 1.0;

  AudioBuffer buf;
  buf.sample_rate = rate;
  buf.channels = {std::move(left), std::move(right)};
  for (auto& ch : buf.channels) {
    for (std::size_t i = 0; i < ch.size(); ++i) ch[i] += gain * voice[i];
  }
  normalize_peak(buf.channels, 0.7);
  return buf;
}

std::vector<NamedAudio> test_set(std::size_t count, double seconds, int rate,
                                 std::uint64_t seed) {
  static constexpr std::array<Background, 5> kBackgrounds = {
      Background::Music, Background::Pink, Background::Rain, Background::Harp,
      Background::Babble};
  static constexpr std::array<double, 4> kSnrDb = {0.0, 6.0, -3.0, 12.0};
  const SplitMix64 root(seed);
  std::vector<NamedAudio> items;
  for (std::size_t i = 0; i < count; ++i) {
    std::string name = std::to_string(i + 1);
    if (name.size() < 2) name.insert(0, "0");
    items.push_back({"item" + name, mixture(kBackgrounds[i % kBackgrounds.size()],
                                   kSnrDb[i % kSnrDb.size()], seconds, rate,
                                   root.split(i).next())});
  }
  return items;
}

}  // namespace mnkurt::synth

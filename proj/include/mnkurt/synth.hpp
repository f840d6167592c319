#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mnkurt/audio_io.hpp"
#include "mnkurt/eval.hpp"

namespace mnkurt::synth {

// Deterministic test material. Stand-ins for recorded items: every generator
// is a pure function of its arguments.

/// Plucked-string arpeggio: harmonic notes with exponential decay, one onset
/// every `note_interval` seconds. Mono, peak-normalized to 0.5.
AudioBuffer harp_arpeggio(double seconds, int rate = kAnalysisRate, std::uint64_t seed = 1,
                          double note_interval = 0.25);

/// Voiced pulse train through moving formant resonators with syllabic
/// envelope and short fricative bursts. Mono.
std::vector<double> speech_like(double seconds, int rate, std::uint64_t seed);

/// Pink-ish noise (Kellet filter on Gaussian noise). Mono.
std::vector<double> pink_noise(double seconds, int rate, std::uint64_t seed);

/// Sustained harmonic chords with slow tremolo. Mono.
std::vector<double> chord_pad(double seconds, int rate, std::uint64_t seed);

/// Sparse filtered clicks over a noise bed, like rain on a surface. Mono.
std::vector<double> rain(double seconds, int rate, std::uint64_t seed);

enum class Background { Music, Pink, Rain, Harp, Babble };

/// Stereo mixture: a background with decorrelated channels plus a
/// centre-panned speech-like voice, mixed at `snr_db` (voice over
/// background), peak-normalized to 0.7.
AudioBuffer mixture(Background bg, double snr_db, double seconds, int rate, std::uint64_t seed);

/// `count` stereo mixtures cycling through the backgrounds and a few mixing
/// ratios, named item01, item02, ...
std::vector<NamedAudio> test_set(std::size_t count, double seconds = 10.0,
                                 int rate = kAnalysisRate, std::uint64_t seed = 2019);

}  // namespace mnkurt::synth

#include "mnkurt/measure.hpp"

#include <string>
#include <tuple>

#include "mnkurt/baseline.hpp"
#include "mnkurt/pi_measure.hpp"

namespace mnkurt {

std::string_view to_string(MeasureId id) {
  switch (id) {
    case MeasureId::DeltaKurt: return "delta_kurt";
    case MeasureId::DeltaKurtLim: return "delta_kurt_lim";
    case MeasureId::DeltaKurtW: return "delta_kurt_w";
    case MeasureId::DeltaKurtPi: return "delta_kurt_pi";
  }
  return "unknown";
}

std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (MeasureId id : kAllMeasures) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DegenerateBand: return "DegenerateBand";
    case ErrorCode::EmptyAfterPreprocessing: return "EmptyAfterPreprocessing";
    case ErrorCode::NotComputable: return "NotComputable";
    case ErrorCode::TargetAlwaysActive: return "TargetAlwaysActive";
  }
  return "Unknown";
}

MeasureResult measure_spectra(MeasureId id, const PowerSpectrogram& nin,
                              const PowerSpectrogram& nout, const SubBandLayout& bands) {
  switch (id) {
    case MeasureId::DeltaKurt: return delta_kurt(nin, nout);
    case MeasureId::DeltaKurtLim: return delta_kurt_lim(nin, nout);
    case MeasureId::DeltaKurtW: return delta_kurt_w(nin, nout);
    case MeasureId::DeltaKurtPi: return delta_kurt_pi(nin, nout, bands);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown measure");
}

namespace {

std::vector<AudioBuffer> channels_to_measure(const AudioBuffer& buf, const MeasureOptions& opt) {
  std::vector<AudioBuffer> out;
  switch (opt.channels) {
    case ChannelPolicy::MonoMix:
      out.push_back(downmix_or_select(buf, ChannelSelection::mono_mix()));
      break;
    case ChannelPolicy::Index:
      out.push_back(downmix_or_select(buf, ChannelSelection::channel(opt.channel_index)));
      break;
    case ChannelPolicy::WorstChannel:
      for (std::size_t c = 0; c < buf.num_channels(); ++c) {
        out.push_back(downmix_or_select(buf, ChannelSelection::channel(c)));
      }
      break;
  }
  return out;
}

// Prefers the higher scaled value, then the higher raw value.
bool worse(const MeasureResult& a, const MeasureResult& b) {
  if (a.scaled != b.scaled) return a.scaled > b.scaled;
  return a.raw > b.raw;
}

}  // namespace

std::vector<MeasureOutcome> measure_audio(std::span<const MeasureId> ids, const AudioBuffer& nin,
                                          const AudioBuffer& nout,
                                          const MeasureOptions& options) {
  options.stft.validate();
  AudioBuffer in = to_analysis_rate(nin, options.stft.sample_rate);
  AudioBuffer out = to_analysis_rate(nout, options.stft.sample_rate);
  trim_to_common_length(in, out);

  MeasureOptions opt = options;
  if (opt.channels == ChannelPolicy::WorstChannel && in.num_channels() != out.num_channels()) {
    opt.channels = ChannelPolicy::MonoMix;
  }
  const auto in_channels = channels_to_measure(in, opt);
  const auto out_channels = channels_to_measure(out, opt);

  std::vector<MeasureOutcome> outcomes(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) outcomes[i].id = ids[i];

  for (std::size_t c = 0; c < in_channels.size(); ++c) {
    auto pin = power_spectrogram(in_channels[c].channels.front(), opt.stft);
    auto pout = power_spectrogram(out_channels[c].channels.front(), opt.stft);
    if (opt.activity) std::tie(pin, pout) = select_noise_frames(pin, pout, *opt.activity);

    for (auto& o : outcomes) {
      try {
        auto r = measure_spectra(o.id, pin, pout, opt.bands);
        if (!o.result || worse(r, *o.result)) o.result = std::move(r);
      } catch (const Error& e) {
        // A channel that cannot be measured does not hide the others.
        if (!o.error) {
          o.error = e.code();
          o.reason = e.what();
        }
      }
    }
  }
  for (auto& o : outcomes) {
    if (o.result) {
      o.error.reset();
      o.reason.clear();
    }
  }
  return outcomes;
}

MeasureResult measure_audio(MeasureId id, const AudioBuffer& nin, const AudioBuffer& nout,
                            const MeasureOptions& options) {
  const MeasureId ids[] = {id};
  auto outcomes = measure_audio(ids, nin, nout, options);
  auto& o = outcomes.front();
  if (!o.result) throw Error(*o.error, o.reason);
  return std::move(*o.result);
}

MeasureResult delta_kurt_pi(const AudioBuffer& nin, const AudioBuffer& nout,
                            const StftConfig& cfg, const SubBandLayout& layout) {
  MeasureOptions opt;
  opt.stft = cfg;
  opt.bands = layout;
  return measure_audio(MeasureId::DeltaKurtPi, nin, nout, opt);
}

}  // namespace mnkurt

#include "mnkurt/activity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "mnkurt/error.hpp"

namespace mnkurt {

std::size_t ActivityMask::inactive_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), false));
}

ActivityMask parse_activity_mask(std::istream& in) {
  ActivityMask mask;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char c : line) {
      if (c == '0' || c == '1') {
        mask.active.push_back(c == '1');
      } else if (!std::isspace(static_cast<unsigned char>(c)) && c != ',') {
        throw Error(ErrorCode::CorruptFile, "activity mask line " + std::to_string(line_no) +
                                                ": unexpected character '" + c + "'");
      }
    }
  }
  return mask;
}

ActivityMask load_activity_mask(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse_activity_mask(in);
}

ActivityMask activity_from_target(const AudioBuffer& target, const StftConfig& cfg,
                                  double gate_dbfs) {
  const AudioBuffer mono = downmix_or_select(target, ChannelSelection::mono_mix());
  const auto& x = mono.channels.front();
  const double gate = std::pow(10.0, gate_dbfs / 10.0);  // mean-square threshold
  ActivityMask mask;
  const std::size_t frames = cfg.num_frames(x.size());
  mask.active.resize(frames);
  for (std::size_t l = 0; l < frames; ++l) {
    double acc = 0.0;
    for (std::size_t n = 0; n < cfg.window_len; ++n) {
      const double s = x[l * cfg.hop + n];
      acc += s * s;
    }
    mask.active[l] = acc / static_cast<double>(cfg.window_len) > gate;
  }
  return mask;
}

std::pair<PowerSpectrogram, PowerSpectrogram> select_noise_frames(
    const PowerSpectrogram& nin, const PowerSpectrogram& nout, const ActivityMask& mask) {
  if (mask.size() != nin.frames() || mask.size() != nout.frames()) {
    throw Error(ErrorCode::InvalidArgument,
                "activity mask has " + std::to_string(mask.size()) + " frames, spectrograms " +
                    std::to_string(nin.frames()) + " and " + std::to_string(nout.frames()));
  }
  const std::size_t keep = mask.inactive_count();
  if (keep == 0) {
    throw Error(ErrorCode::TargetAlwaysActive, "the target source is active in every frame");
  }
  auto gather = [&](const PowerSpectrogram& src) {
    PowerSpectrogram out;
    out.config = src.config;
    out.power = FrameMatrix<double>(keep, src.power.bins());
    std::size_t i = 0;
    for (std::size_t l = 0; l < mask.size(); ++l) {
      if (mask.active[l]) continue;
      auto row = src.power.frame(l);
      std::copy(row.begin(), row.end(), out.power.frame(i++).begin());
    }
    return out;
  };
  return {gather(nin), gather(nout)};
}

}  // namespace mnkurt

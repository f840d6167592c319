#include "mnkurt/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "mnkurt/error.hpp"

namespace mnkurt {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV codec assumes a little-endian host");

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > remaining()) {
      throw Error(ErrorCode::CorruptFile, "WAV: unexpected end of file");
    }
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::uint32_t u32() {
    auto b = take(4);
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
           std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
  }
  std::uint16_t u16() {
    auto b = take(2);
    return std::uint16_t(b[0] | b[1] << 8);
  }
  std::string tag() {
    auto b = take(4);
    return std::string(b.begin(), b.end());
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FmtChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const FmtChunk& fmt) {
  switch (fmt.bits) {
    case 16: {
      std::int16_t v;
      std::memcpy(&v, p, 2);
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = std::int32_t(p[0]) | std::int32_t(p[1]) << 8 |
                       std::int32_t(p[2]) << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    case 32: {
      if (fmt.format == kFormatFloat) {
        float f;
        std::memcpy(&f, p, 4);
        return f;
      }
      std::int32_t v;
      std::memcpy(&v, p, 4);
      return v / 2147483648.0;
    }
    case 64: {
      double d;
      std::memcpy(&d, p, 8);
      return d;
    }
  }
  return 0.0;
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(std::uint8_t(v));
  out.push_back(std::uint8_t(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

std::int64_t quantize(double x, int bits) {
  const double full = std::ldexp(1.0, bits - 1);
  const double v = std::round(x * full);
  return static_cast<std::int64_t>(std::clamp(v, -full, full - 1.0));
}

}  // namespace

AudioBuffer AudioBuffer::mono(std::vector<double> samples, int rate) {
  AudioBuffer buf;
  buf.channels.push_back(std::move(samples));
  buf.sample_rate = rate;
  return buf;
}

void AudioBuffer::validate() const {
  if (sample_rate <= 0) {
    throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
  }
  for (const auto& ch : channels) {
    if (ch.size() != channels.front().size()) {
      throw Error(ErrorCode::InvalidArgument, "channels differ in length");
    }
  }
}

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  if (r.remaining() < 12) throw Error(ErrorCode::CorruptFile, "WAV: truncated header");
  if (r.tag() != "RIFF") throw Error(ErrorCode::UnsupportedFormat, "not a RIFF file");
  r.u32();  // riff size, often wrong in the wild
  if (r.tag() != "WAVE") throw Error(ErrorCode::UnsupportedFormat, "not a WAVE file");

  std::optional<FmtChunk> fmt;
  while (r.remaining() >= 8) {
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      auto body = Reader(r.take(size));
      FmtChunk f;
      if (size < 16) throw Error(ErrorCode::CorruptFile, "WAV: short fmt chunk");
      f.format = body.u16();
      f.channels = body.u16();
      f.rate = body.u32();
      body.u32();  // byte rate
      body.u16();  // block align
      f.bits = body.u16();
      if (f.format == kFormatExtensible) {
        if (size < 40) throw Error(ErrorCode::CorruptFile, "WAV: short extensible fmt");
        body.u16();  // cb size
        body.u16();  // valid bits
        body.u32();  // channel mask
        f.format = body.u16();  // first two bytes of the sub-format GUID
      }
      const bool pcm_ok = f.format == kFormatPcm &&
                          (f.bits == 16 || f.bits == 24 || f.bits == 32);
      const bool float_ok = f.format == kFormatFloat && (f.bits == 32 || f.bits == 64);
      if (!pcm_ok && !float_ok) {
        throw Error(ErrorCode::UnsupportedFormat,
                    "WAV: unsupported codec " + std::to_string(f.format) + " / " +
                        std::to_string(f.bits) + " bits");
      }
      if (f.channels == 0 || f.rate == 0) {
        throw Error(ErrorCode::CorruptFile, "WAV: zero channels or sample rate");
      }
      fmt = f;
      if (size % 2 == 1 && r.remaining() > 0) r.take(1);
    } else if (id == "data") {
      if (!fmt) throw Error(ErrorCode::CorruptFile, "WAV: data chunk before fmt chunk");
      if (size > r.remaining()) throw Error(ErrorCode::CorruptFile, "WAV: truncated data chunk");
      const std::size_t stride = fmt->bits / 8;
      const std::size_t block = stride * fmt->channels;
      const std::size_t frames = size / block;
      auto data = r.take(size);

      AudioBuffer buf;
      buf.sample_rate = static_cast<int>(fmt->rate);
      buf.channels.assign(fmt->channels, std::vector<double>(frames));
      for (std::size_t i = 0; i < frames; ++i) {
        for (std::size_t c = 0; c < fmt->channels; ++c) {
          buf.channels[c][i] = decode_sample(data.data() + i * block + c * stride, *fmt);
        }
      }
      return buf;
    } else {
      if (size > r.remaining()) throw Error(ErrorCode::CorruptFile, "WAV: truncated chunk " + id);
      r.take(size);
      if (size % 2 == 1 && r.remaining() > 0) r.take(1);
    }
  }
  throw Error(ErrorCode::CorruptFile, "WAV: no data chunk");
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf, SampleFormat format) {
  buf.validate();
  std::uint16_t bits = 16;
  std::uint16_t tag = kFormatPcm;
  switch (format) {
    case SampleFormat::Pcm16: bits = 16; break;
    case SampleFormat::Pcm24: bits = 24; break;
    case SampleFormat::Pcm32: bits = 32; break;
    case SampleFormat::Float32: bits = 32; tag = kFormatFloat; break;
    case SampleFormat::Float64: bits = 64; tag = kFormatFloat; break;
  }
  const auto channels = static_cast<std::uint16_t>(buf.num_channels());
  const std::uint32_t block = channels * (bits / 8u);
  const std::uint32_t data_size = static_cast<std::uint32_t>(buf.num_frames() * block);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, channels);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate) * block);
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, bits);
  put_tag(out, "data");
  put_u32(out, data_size);

  for (std::size_t i = 0; i < buf.num_frames(); ++i) {
    for (const auto& ch : buf.channels) {
      const double x = ch[i];
      switch (format) {
        case SampleFormat::Pcm16: put_u16(out, std::uint16_t(quantize(x, 16))); break;
        case SampleFormat::Pcm24: {
          const auto v = static_cast<std::uint32_t>(quantize(x, 24));
          out.push_back(std::uint8_t(v));
          out.push_back(std::uint8_t(v >> 8));
          out.push_back(std::uint8_t(v >> 16));
          break;
        }
        case SampleFormat::Pcm32: put_u32(out, std::uint32_t(quantize(x, 32))); break;
        case SampleFormat::Float32: put_u32(out, std::bit_cast<std::uint32_t>(float(x))); break;
        case SampleFormat::Float64: {
          const auto v = std::bit_cast<std::uint64_t>(x);
          put_u32(out, std::uint32_t(v));
          put_u32(out, std::uint32_t(v >> 32));
          break;
        }
      }
    }
  }
  return out;
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

void save_wav(const std::filesystem::path& path, const AudioBuffer& buf,
              SampleFormat format) {
  const auto bytes = encode_wav(buf, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

AudioBuffer downmix_or_select(const AudioBuffer& buf, ChannelSelection sel) {
  buf.validate();
  if (sel.index) {
    if (*sel.index >= buf.num_channels()) {
      throw Error(ErrorCode::InvalidChannel,
                  "channel index " + std::to_string(*sel.index) + " out of range (" +
                      std::to_string(buf.num_channels()) + " channels)");
    }
    return AudioBuffer::mono(buf.channels[*sel.index], buf.sample_rate);
  }
  if (buf.num_channels() == 0) {
    throw Error(ErrorCode::InvalidChannel, "cannot mix a buffer without channels");
  }
  if (buf.num_channels() == 1) return buf;
  std::vector<double> mix(buf.num_frames(), 0.0);
  const double scale = 1.0 / static_cast<double>(buf.num_channels());
  for (std::size_t i = 0; i < mix.size(); ++i) {
    double acc = 0.0;
    for (const auto& ch : buf.channels) acc += ch[i];
    mix[i] = acc * scale;
  }
  return AudioBuffer::mono(std::move(mix), buf.sample_rate);
}

AudioBuffer to_analysis_rate(const AudioBuffer& buf, int rate) {
  return buf.sample_rate == rate ? buf : resample(buf, rate);
}

void trim_to_common_length(AudioBuffer& a, AudioBuffer& b) {
  const std::size_t n = std::min(a.num_frames(), b.num_frames());
  for (auto& ch : a.channels) ch.resize(n);
  for (auto& ch : b.channels) ch.resize(n);
}

}  // namespace mnkurt

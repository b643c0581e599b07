#include "transteg/audio_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

#include "transteg/bytes.hpp"
#include "transteg/error.hpp"

namespace transteg::audio {

namespace {

Error malformed(const std::filesystem::path& path, const std::string& why) {
  return Error(ErrorKind::input,
               "malformed WAV container '" + path.string() + "': " + why);
}

}  // namespace

PcmStream read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::input, "cannot open '" + path.string() + "'");
  }
  const Bytes raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  const ByteView b(raw);

  if (b.size() < 12 || !std::equal(b.begin(), b.begin() + 4, "RIFF") ||
      !std::equal(b.begin() + 8, b.begin() + 12, "WAVE")) {
    throw malformed(path, "missing RIFF/WAVE signature");
  }

  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const auto id = b.subspan(pos, 4);
    const std::uint32_t size = le::get32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) {
      throw malformed(path, "chunk runs past end of file");
    }

    if (std::equal(id.begin(), id.end(), "fmt ")) {
      if (size < 16) throw malformed(path, "fmt chunk too short");
      const std::uint16_t format_tag = le::get16(b, body);
      const std::uint16_t channels = le::get16(b, body + 2);
      const std::uint32_t rate = le::get32(b, body + 4);
      const std::uint16_t bits = le::get16(b, body + 14);
      // WAVE_FORMAT_EXTENSIBLE carries the real tag in the subformat GUID.
      const bool pcm = format_tag == 1 ||
                       (format_tag == 0xFFFE && size >= 26 &&
                        le::get16(b, body + 24) == 1);
      if (!pcm) {
        throw Error(ErrorKind::format,
                    "unsupported format tag " + std::to_string(format_tag) +
                        " (linear PCM required)");
      }
      if (channels != kChannels) {
        throw Error(ErrorKind::format, "unsupported channel count " +
                                           std::to_string(channels));
      }
      if (rate != static_cast<std::uint32_t>(kSampleRate)) {
        throw Error(ErrorKind::format,
                    "unsupported sample rate " + std::to_string(rate));
      }
      if (bits != 16) {
        throw Error(ErrorKind::format,
                    "unsupported sample width " + std::to_string(bits));
      }
      have_fmt = true;
    } else if (std::equal(id.begin(), id.end(), "data")) {
      if (!have_fmt) throw malformed(path, "data chunk before fmt chunk");
      if (size % 2 != 0) throw malformed(path, "odd data chunk size");
      PcmStream out;
      out.samples.resize(size / 2);
      for (std::size_t i = 0; i < out.samples.size(); ++i) {
        out.samples[i] = static_cast<std::int16_t>(le::get16(b, body + 2 * i));
      }
      return out;
    }
    pos = body + size + (size & 1u);
  }
  throw malformed(path, have_fmt ? "no data chunk" : "no fmt chunk");
}

void write_wav(const PcmStream& stream, const std::filesystem::path& path) {
  if (stream.sample_rate != kSampleRate || stream.channels != kChannels) {
    throw Error(ErrorKind::format, "only 8000 Hz mono streams can be written");
  }
  const auto data_bytes = static_cast<std::uint32_t>(stream.samples.size() * 2);

  Bytes out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  le::put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  le::put32(out, 16);
  le::put16(out, 1);
  le::put16(out, kChannels);
  le::put32(out, kSampleRate);
  le::put32(out, kSampleRate * kChannels * 2);
  le::put16(out, kChannels * 2);
  le::put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  le::put32(out, data_bytes);
  for (std::int16_t s : stream.samples) {
    le::put16(out, static_cast<std::uint16_t>(s));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) {
    throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
  }
}

std::vector<PcmFrame> frame_stream(const PcmStream& stream) {
  const auto& s = stream.samples;
  const std::size_t count = (s.size() + kFrameSamples - 1) / kFrameSamples;
  std::vector<PcmFrame> frames(count);
  for (std::size_t i = 0; i < count; ++i) {
    frames[i].fill(0);
    const std::size_t begin = i * kFrameSamples;
    const std::size_t end = std::min(begin + kFrameSamples, s.size());
    std::copy(s.begin() + static_cast<std::ptrdiff_t>(begin),
              s.begin() + static_cast<std::ptrdiff_t>(end), frames[i].begin());
  }
  return frames;
}

PcmStream unframe(std::span<const PcmFrame> frames, std::size_t sample_count) {
  PcmStream out;
  out.samples.reserve(frames.size() * kFrameSamples);
  for (const auto& f : frames) {
    out.samples.insert(out.samples.end(), f.begin(), f.end());
  }
  out.samples.resize(std::min(sample_count, out.samples.size()));
  return out;
}

}  // namespace transteg::audio

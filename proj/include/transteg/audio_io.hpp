#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace transteg::audio {

inline constexpr int kSampleRate = 8000;
inline constexpr int kChannels = 1;
/// 20 ms at 8 kHz.
inline constexpr std::size_t kFrameSamples = 160;

struct PcmStream {
  std::vector<std::int16_t> samples;
  int sample_rate = kSampleRate;
  int channels = kChannels;
};

using PcmFrame = std::array<std::int16_t, kFrameSamples>;

/// Reads a canonical or extended RIFF/WAVE file holding 16-bit mono 8 kHz PCM.
/// Unknown chunks before "data" are skipped.
PcmStream read_wav(const std::filesystem::path& path);

/// Writes a 44-byte canonical header followed by little-endian samples.
void write_wav(const PcmStream& stream, const std::filesystem::path& path);

/// Splits into 160-sample frames; the last frame is zero-padded.
std::vector<PcmFrame> frame_stream(const PcmStream& stream);

/// Concatenates frames and trims to `sample_count` samples.
PcmStream unframe(std::span<const PcmFrame> frames, std::size_t sample_count);

}  // namespace transteg::audio

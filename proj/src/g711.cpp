#include "transteg/g711.hpp"

#include <string>

#include "transteg/error.hpp"

namespace transteg::codec {

namespace {

constexpr int kSignBit = 0x80;
constexpr int kQuantMask = 0x0F;
constexpr int kSegShift = 4;
constexpr int kSegMask = 0x70;
constexpr int kBias = 0x84;
constexpr int kClip = 8159;

constexpr std::int16_t kSegAEnd[8] = {0x1F,  0x3F,  0x7F,  0xFF,
                                      0x1FF, 0x3FF, 0x7FF, 0xFFF};
constexpr std::int16_t kSegUEnd[8] = {0x3F,  0x7F,  0xFF,  0x1FF,
                                      0x3FF, 0x7FF, 0xFFF, 0x1FFF};

int segment(int val, const std::int16_t (&table)[8]) {
  for (int i = 0; i < 8; ++i) {
    if (val <= table[i]) return i;
  }
  return 8;
}

}  // namespace

std::uint8_t linear_to_alaw(std::int16_t pcm) {
  int val = pcm >> 3;
  int mask;
  if (val >= 0) {
    mask = 0xD5;
  } else {
    mask = 0x55;
    val = -val - 1;
  }
  const int seg = segment(val, kSegAEnd);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7F ^ mask);

  int aval = seg << kSegShift;
  aval |= (seg < 2) ? (val >> 1) & kQuantMask : (val >> seg) & kQuantMask;
  return static_cast<std::uint8_t>(aval ^ mask);
}

std::int16_t alaw_to_linear(std::uint8_t code) {
  const int a = code ^ 0x55;
  int t = (a & kQuantMask) << 4;
  const int seg = (a & kSegMask) >> kSegShift;
  switch (seg) {
    case 0:
      t += 8;
      break;
    case 1:
      t += 0x108;
      break;
    default:
      t += 0x108;
      t <<= seg - 1;
  }
  return static_cast<std::int16_t>((a & kSignBit) ? t : -t);
}

std::uint8_t linear_to_ulaw(std::int16_t pcm) {
  int val = pcm >> 2;
  int mask;
  if (val < 0) {
    val = -val;
    mask = 0x7F;
  } else {
    mask = 0xFF;
  }
  if (val > kClip) val = kClip;
  val += kBias >> 2;

  const int seg = segment(val, kSegUEnd);
  if (seg >= 8) return static_cast<std::uint8_t>(0x7F ^ mask);
  const int uval = (seg << 4) | ((val >> (seg + 1)) & 0xF);
  return static_cast<std::uint8_t>(uval ^ mask);
}

std::int16_t ulaw_to_linear(std::uint8_t code) {
  const int u = ~code & 0xFF;
  int t = ((u & kQuantMask) << 3) + kBias;
  t <<= (u & kSegMask) >> kSegShift;
  return static_cast<std::int16_t>((u & kSignBit) ? (kBias - t) : (t - kBias));
}

std::uint8_t compress(std::int16_t pcm, Law law) {
  return law == Law::mu ? linear_to_ulaw(pcm) : linear_to_alaw(pcm);
}

std::int16_t expand(std::uint8_t code, Law law) {
  return law == Law::mu ? ulaw_to_linear(code) : alaw_to_linear(code);
}

Bytes g711_encode(const audio::PcmFrame& frame, Law law) {
  Bytes out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out[i] = compress(frame[i], law);
  return out;
}

audio::PcmFrame g711_decode(ByteView payload, Law law) {
  if (payload.size() != audio::kFrameSamples) {
    throw Error(ErrorKind::format, "G.711 payload must be 160 bytes, got " +
                                       std::to_string(payload.size()));
  }
  audio::PcmFrame frame;
  for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = expand(payload[i], law);
  return frame;
}

}  // namespace transteg::codec

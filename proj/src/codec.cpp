#include "transteg/codec.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "transteg/error.hpp"

namespace transteg::codec {

CodecSpec g711_mu() { return {CodecId::g711_mu, 0, 160, 64000}; }
CodecSpec g711_a() { return {CodecId::g711_a, 8, 160, 64000}; }
CodecSpec g726_32(int payload_type) {
  return {CodecId::g726_32, payload_type, 80, 32000};
}

std::span<const CodecSpec> registered_codecs() {
  static const std::array<CodecSpec, 3> kAll = {g711_mu(), g711_a(), g726_32()};
  return kAll;
}

std::optional<CodecSpec> codec_by_name(std::string_view name) {
  std::string n(name);
  std::transform(n.begin(), n.end(), n.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  std::erase(n, '.');
  if (n == "g711u" || n == "g711mu" || n == "pcmu") return g711_mu();
  if (n == "g711a" || n == "pcma") return g711_a();
  if (n == "g726-32" || n == "g726_32" || n == "g72632") return g726_32();
  return std::nullopt;
}

CodecSpec require_codec(std::string_view name) {
  if (auto spec = codec_by_name(name)) return *spec;
  throw Error(ErrorKind::usage, "unknown codec " + std::string(name));
}

std::string codec_name(CodecId id) {
  switch (id) {
    case CodecId::g711_mu:
      return "g711u";
    case CodecId::g711_a:
      return "g711a";
    case CodecId::g726_32:
      return "g726-32";
  }
  return "?";
}

bool is_g711(const CodecSpec& spec) {
  return spec.id == CodecId::g711_mu || spec.id == CodecId::g711_a;
}

Law law_of(const CodecSpec& spec) {
  switch (spec.id) {
    case CodecId::g711_mu:
      return Law::mu;
    case CodecId::g711_a:
      return Law::a;
    default:
      throw Error(ErrorKind::invariant, codec_name(spec.id) + " is not G.711");
  }
}

CodecSpec codec_lookup(int payload_type, const DynamicPtMap& dynamic_map) {
  if (payload_type == 0) return g711_mu();
  if (payload_type == 8) return g711_a();
  if (auto it = dynamic_map.find(payload_type); it != dynamic_map.end()) {
    return it->second;
  }
  throw Error(ErrorKind::format,
              "unknown PT " + std::to_string(payload_type));
}

Bytes transcode(ByteView payload, const CodecSpec& from, const CodecSpec& to,
                TranscodeState& state) {
  if (is_g711(from) && to.id == CodecId::g726_32) {
    return g726_encode(g711_decode(payload, law_of(from)), state.encoder);
  }
  if (from.id == CodecId::g726_32 && is_g711(to)) {
    return g711_encode(g726_decode(payload, state.decoder), law_of(to));
  }
  throw Error(ErrorKind::invariant, "unsupported pair " + codec_name(from.id) +
                                        " -> " + codec_name(to.id));
}

Bytes encode_frame(const audio::PcmFrame& frame, const CodecSpec& spec,
                   TranscodeState& state) {
  if (is_g711(spec)) return g711_encode(frame, law_of(spec));
  return g726_encode(frame, state.encoder);
}

audio::PcmFrame decode_payload(ByteView payload, const CodecSpec& spec,
                               TranscodeState& state) {
  if (is_g711(spec)) return g711_decode(payload, law_of(spec));
  return g726_decode(payload, state.decoder);
}

double segmental_snr(std::span<const std::int16_t> reference,
                     std::span<const std::int16_t> degraded) {
  constexpr std::size_t kWindow = 80;  // 10 ms
  // Windows quieter than about -50 dBFS RMS count as silence.
  constexpr double kActivityFloor = 100.0 * 100.0 * kWindow;
  constexpr double kMin = -10.0;
  constexpr double kMax = 35.0;

  const std::size_t n = std::min(reference.size(), degraded.size());
  double sum = 0.0;
  std::size_t windows = 0;
  for (std::size_t start = 0; start + kWindow <= n; start += kWindow) {
    double signal = 0.0;
    double noise = 0.0;
    for (std::size_t i = start; i < start + kWindow; ++i) {
      const double r = reference[i];
      const double e = r - degraded[i];
      signal += r * r;
      noise += e * e;
    }
    if (signal < kActivityFloor) continue;
    const double snr = noise == 0.0 ? kMax : 10.0 * std::log10(signal / noise);
    sum += std::clamp(snr, kMin, kMax);
    ++windows;
  }
  return windows == 0 ? 0.0 : sum / static_cast<double>(windows);
}

}  // namespace transteg::codec

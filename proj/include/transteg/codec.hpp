#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "transteg/g711.hpp"
#include "transteg/g726.hpp"

namespace transteg::codec {

enum class CodecId { g711_mu, g711_a, g726_32 };

struct CodecSpec {
  CodecId id;
  int payload_type;
  std::size_t bytes_per_frame;  // per 160-sample frame
  int bit_rate;                 // bit/s

  friend bool operator==(const CodecSpec&, const CodecSpec&) = default;
};

inline constexpr int kDefaultG726PayloadType = 96;

CodecSpec g711_mu();
CodecSpec g711_a();
CodecSpec g726_32(int payload_type = kDefaultG726PayloadType);

/// Every codec the artifact knows, with default payload types.
std::span<const CodecSpec> registered_codecs();

/// "g711u", "g711a", "g726-32" (a few aliases accepted).
std::optional<CodecSpec> codec_by_name(std::string_view name);
/// Same, throwing "unknown codec" for unregistered names.
CodecSpec require_codec(std::string_view name);
std::string codec_name(CodecId id);

/// Law of a G.711 codec; throws for anything else.
Law law_of(const CodecSpec& spec);
bool is_g711(const CodecSpec& spec);

using DynamicPtMap = std::map<int, CodecSpec>;

/// Static PTs 0 and 8 per RFC 3551; everything else through `dynamic_map`.
CodecSpec codec_lookup(int payload_type, const DynamicPtMap& dynamic_map = {});

/// ADPCM states needed to carry one stream direction through transcoding.
struct TranscodeState {
  AdpcmState encoder;
  AdpcmState decoder;
};

/// Decode `payload` as `from`, re-encode as `to`. Only G.711 <-> G.726-32.
Bytes transcode(ByteView payload, const CodecSpec& from, const CodecSpec& to,
                TranscodeState& state);

/// Encodes a PCM frame with any registered codec, threading ADPCM state.
Bytes encode_frame(const audio::PcmFrame& frame, const CodecSpec& spec,
                   TranscodeState& state);
/// Decodes one frame's payload with any registered codec.
audio::PcmFrame decode_payload(ByteView payload, const CodecSpec& spec,
                               TranscodeState& state);

/// Mean per-window SNR in dB over 10 ms windows whose reference energy is
/// above the activity floor. Each window is clamped to [-10, 35] dB.
double segmental_snr(std::span<const std::int16_t> reference,
                     std::span<const std::int16_t> degraded);

}  // namespace transteg::codec

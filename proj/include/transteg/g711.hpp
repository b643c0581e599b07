#pragma once

#include <cstdint>

#include "transteg/audio_io.hpp"
#include "transteg/bytes.hpp"

namespace transteg::codec {

enum class Law { mu, a };

// Per-sample companding, CCITT reference arithmetic.
std::uint8_t linear_to_ulaw(std::int16_t pcm);
std::int16_t ulaw_to_linear(std::uint8_t code);
std::uint8_t linear_to_alaw(std::int16_t pcm);
std::int16_t alaw_to_linear(std::uint8_t code);

std::uint8_t compress(std::int16_t pcm, Law law);
std::int16_t expand(std::uint8_t code, Law law);

/// One code byte per sample; 160 bytes out.
Bytes g711_encode(const audio::PcmFrame& frame, Law law);

/// Throws on a payload that is not exactly 160 bytes.
audio::PcmFrame g711_decode(ByteView payload, Law law);

}  // namespace transteg::codec

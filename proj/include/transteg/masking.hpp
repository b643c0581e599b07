#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "transteg/bytes.hpp"

namespace transteg {

using MaskKey = std::array<std::uint8_t, 16>;

/// SRTP-style AES-128 counter-mode keystream. The counter block carries the
/// SSRC and a 48-bit packet index, so (key, ssrc, index) fixes the stream.
Bytes keystream(const MaskKey& key, std::uint32_t ssrc, std::uint64_t index,
                std::size_t length);

/// XOR with the keystream. Applying it twice restores the input.
Bytes mask(ByteView region, const MaskKey& key, std::uint32_t ssrc,
           std::uint64_t index);
void mask_in_place(std::span<std::uint8_t> region, const MaskKey& key,
                   std::uint32_t ssrc, std::uint64_t index);

/// Extends 16-bit RTP sequence numbers to a 48-bit index by counting
/// rollovers, the way SRTP receivers do for in-order streams.
class PacketIndexer {
 public:
  std::uint64_t next(std::uint16_t sequence_number);

 private:
  bool started_ = false;
  std::uint16_t last_ = 0;
  std::uint64_t rollovers_ = 0;
};

}  // namespace transteg

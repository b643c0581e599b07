#pragma once

#include <cstdint>

#include "transteg/bytes.hpp"

namespace transteg::rtp {

inline constexpr std::size_t kHeaderSize = 12;

/// Fixed RTP header (RFC 3550) plus payload. CSRC lists and header
/// extensions are not supported.
struct RtpPacket {
  std::uint8_t version = 2;
  bool padding = false;
  bool extension = false;
  bool marker = false;
  std::uint8_t csrc_count = 0;
  std::uint8_t payload_type = 0;
  std::uint16_t sequence_number = 0;
  std::uint32_t timestamp = 0;
  std::uint32_t ssrc = 0;
  Bytes payload;

  friend bool operator==(const RtpPacket&, const RtpPacket&) = default;
};

RtpPacket parse_rtp(ByteView bytes);
Bytes serialize_rtp(const RtpPacket& packet);

/// Folded 16-bit one's-complement sum, not yet complemented.
std::uint16_t ones_complement_sum(ByteView bytes, std::uint32_t initial = 0);

/// UDP checksum over the IPv4 pseudo-header and `udp_segment` (UDP header
/// plus data). The checksum field inside the segment is treated as zero.
/// A computed 0 is returned as 0xFFFF.
std::uint16_t udp_checksum(std::uint32_t src_addr, std::uint32_t dst_addr,
                           ByteView udp_segment);

}  // namespace transteg::rtp

#include "transteg/rtp.hpp"

#include <string>

#include "transteg/error.hpp"

namespace transteg::rtp {

RtpPacket parse_rtp(ByteView bytes) {
  if (bytes.size() < kHeaderSize) {
    throw Error(ErrorKind::format, "short buffer: " +
                                       std::to_string(bytes.size()) +
                                       " bytes, RTP header needs 12");
  }
  RtpPacket p;
  p.version = bytes[0] >> 6;
  p.padding = (bytes[0] & 0x20) != 0;
  p.extension = (bytes[0] & 0x10) != 0;
  p.csrc_count = bytes[0] & 0x0F;
  p.marker = (bytes[1] & 0x80) != 0;
  p.payload_type = bytes[1] & 0x7F;

  if (p.version != 2) {
    throw Error(ErrorKind::format,
                "unsupported RTP version " + std::to_string(p.version));
  }
  if (p.csrc_count != 0) {
    throw Error(ErrorKind::format, "CSRC list not supported (csrc_count " +
                                       std::to_string(p.csrc_count) + ")");
  }
  if (p.extension) {
    throw Error(ErrorKind::format, "RTP header extension not supported");
  }

  p.sequence_number = be::get16(bytes, 2);
  p.timestamp = be::get32(bytes, 4);
  p.ssrc = be::get32(bytes, 8);
  p.payload.assign(bytes.begin() + kHeaderSize, bytes.end());
  return p;
}

Bytes serialize_rtp(const RtpPacket& p) {
  Bytes out;
  out.reserve(kHeaderSize + p.payload.size());
  out.push_back(static_cast<std::uint8_t>((p.version << 6) | (p.padding << 5) |
                                          (p.extension << 4) |
                                          (p.csrc_count & 0x0F)));
  out.push_back(
      static_cast<std::uint8_t>((p.marker << 7) | (p.payload_type & 0x7F)));
  be::put16(out, p.sequence_number);
  be::put32(out, p.timestamp);
  be::put32(out, p.ssrc);
  out.insert(out.end(), p.payload.begin(), p.payload.end());
  return out;
}

std::uint16_t ones_complement_sum(ByteView bytes, std::uint32_t initial) {
  std::uint64_t sum = initial;
  std::size_t i = 0;
  for (; i + 1 < bytes.size(); i += 2) sum += (bytes[i] << 8) | bytes[i + 1];
  if (i < bytes.size()) sum += bytes[i] << 8;
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<std::uint16_t>(sum);
}

std::uint16_t udp_checksum(std::uint32_t src_addr, std::uint32_t dst_addr,
                           ByteView udp_segment) {
  constexpr std::uint32_t kProtoUdp = 17;
  if (udp_segment.size() < 8) {
    throw Error(ErrorKind::format, "UDP segment shorter than its header");
  }
  std::uint32_t pseudo = (src_addr >> 16) + (src_addr & 0xFFFF) +
                         (dst_addr >> 16) + (dst_addr & 0xFFFF) + kProtoUdp +
                         static_cast<std::uint32_t>(udp_segment.size());
  // Sum around the checksum field at offset 6.
  std::uint32_t sum = ones_complement_sum(udp_segment.first(6), pseudo);
  if (udp_segment.size() > 8) {
    sum = ones_complement_sum(udp_segment.subspan(8), sum);
  }
  const auto result = static_cast<std::uint16_t>(~sum);
  return result == 0 ? 0xFFFF : result;
}

}  // namespace transteg::rtp

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "transteg/rtp.hpp"

namespace transteg::rtp {

struct Endpoints {
  std::uint32_t src_ip = 0;
  std::uint32_t dst_ip = 0;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;

  friend bool operator==(const Endpoints&, const Endpoints&) = default;
};

/// One captured RTP-over-UDP/IPv4 datagram.
struct PacketRecord {
  std::uint64_t timestamp_us = 0;
  Endpoints endpoints;
  std::uint16_t udp_checksum = 0;  // 0 = sender did not checksum
  RtpPacket rtp;

  friend bool operator==(const PacketRecord&, const PacketRecord&) = default;
};

/// UDP header + serialized RTP, with the record's stored checksum.
Bytes udp_segment(const PacketRecord& record);

/// Recomputes the checksum of `record` from its current contents.
std::uint16_t compute_checksum(const PacketRecord& record);

/// Builds a record and fills in a fresh checksum.
PacketRecord make_record(std::uint64_t timestamp_us, const Endpoints& endpoints,
                         RtpPacket rtp);

/// Stored checksum is 0 or matches a recomputation.
bool checksum_valid(const PacketRecord& record);

struct CaptureContents {
  std::vector<PacketRecord> records;
  std::size_t skipped_non_udp = 0;  // pcap only
  std::size_t skipped_non_rtp = 0;  // UDP datagrams RTP parsing rejected
};

inline constexpr char kNativeMagic[9] = "TSCAP001";

/// Detects the native format or classic pcap (Ethernet/IPv4/UDP) by magic.
CaptureContents read_capture(const std::filesystem::path& path);

/// Always writes the native format.
void write_capture(const std::vector<PacketRecord>& records,
                   const std::filesystem::path& path);

CaptureContents parse_native_capture(ByteView bytes);
Bytes encode_native_capture(const std::vector<PacketRecord>& records);
CaptureContents parse_pcap(ByteView bytes);

}  // namespace transteg::rtp

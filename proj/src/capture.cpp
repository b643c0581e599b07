#include "transteg/capture.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <string>

#include "transteg/error.hpp"

namespace transteg::rtp {

namespace {

Error malformed(const std::string& why) {
  return Error(ErrorKind::input, "malformed capture: " + why);
}

// Native record header: u64 ts, u32 src, u32 dst, u16 sport, u16 dport,
// u16 checksum, u16 rtp length.
constexpr std::size_t kNativeRecordHeader = 8 + 4 + 4 + 2 + 2 + 2 + 2;

}  // namespace

Bytes udp_segment(const PacketRecord& record) {
  const Bytes rtp_bytes = serialize_rtp(record.rtp);
  Bytes seg;
  seg.reserve(8 + rtp_bytes.size());
  be::put16(seg, record.endpoints.src_port);
  be::put16(seg, record.endpoints.dst_port);
  be::put16(seg, static_cast<std::uint16_t>(8 + rtp_bytes.size()));
  be::put16(seg, record.udp_checksum);
  seg.insert(seg.end(), rtp_bytes.begin(), rtp_bytes.end());
  return seg;
}

std::uint16_t compute_checksum(const PacketRecord& record) {
  return udp_checksum(record.endpoints.src_ip, record.endpoints.dst_ip,
                      udp_segment(record));
}

PacketRecord make_record(std::uint64_t timestamp_us, const Endpoints& endpoints,
                         RtpPacket rtp) {
  PacketRecord r{timestamp_us, endpoints, 0, std::move(rtp)};
  r.udp_checksum = compute_checksum(r);
  return r;
}

bool checksum_valid(const PacketRecord& record) {
  return record.udp_checksum == 0 ||
         record.udp_checksum == compute_checksum(record);
}

Bytes encode_native_capture(const std::vector<PacketRecord>& records) {
  Bytes out(kNativeMagic, kNativeMagic + 8);
  for (const auto& r : records) {
    const Bytes rtp_bytes = serialize_rtp(r.rtp);
    if (rtp_bytes.size() > 0xFFFF) {
      throw Error(ErrorKind::invariant, "RTP packet too long for capture");
    }
    le::put64(out, r.timestamp_us);
    le::put32(out, r.endpoints.src_ip);
    le::put32(out, r.endpoints.dst_ip);
    le::put16(out, r.endpoints.src_port);
    le::put16(out, r.endpoints.dst_port);
    le::put16(out, r.udp_checksum);
    le::put16(out, static_cast<std::uint16_t>(rtp_bytes.size()));
    out.insert(out.end(), rtp_bytes.begin(), rtp_bytes.end());
  }
  return out;
}

CaptureContents parse_native_capture(ByteView b) {
  if (b.size() < 8 || !std::equal(b.begin(), b.begin() + 8, kNativeMagic)) {
    throw malformed("missing TSCAP001 magic");
  }
  CaptureContents out;
  std::size_t pos = 8;
  while (pos < b.size()) {
    if (pos + kNativeRecordHeader > b.size()) {
      throw malformed("truncated record header at offset " +
                      std::to_string(pos));
    }
    PacketRecord r;
    r.timestamp_us = le::get64(b, pos);
    r.endpoints.src_ip = le::get32(b, pos + 8);
    r.endpoints.dst_ip = le::get32(b, pos + 12);
    r.endpoints.src_port = le::get16(b, pos + 16);
    r.endpoints.dst_port = le::get16(b, pos + 18);
    r.udp_checksum = le::get16(b, pos + 20);
    const std::size_t len = le::get16(b, pos + 22);
    pos += kNativeRecordHeader;
    if (pos + len > b.size()) {
      throw malformed("truncated RTP bytes at offset " + std::to_string(pos));
    }
    try {
      r.rtp = parse_rtp(b.subspan(pos, len));
    } catch (const Error& e) {
      throw malformed(std::string("bad RTP packet: ") + e.what());
    }
    pos += len;
    out.records.push_back(std::move(r));
  }
  return out;
}

CaptureContents parse_pcap(ByteView b) {
  if (b.size() < 24) throw malformed("pcap global header truncated");

  const std::uint32_t magic = le::get32(b, 0);
  bool swapped = false;
  bool nanos = false;
  switch (magic) {
    case 0xA1B2C3D4: break;
    case 0xA1B23C4D: nanos = true; break;
    case 0xD4C3B2A1: swapped = true; break;
    case 0x4D3CB2A1: swapped = nanos = true; break;
    default: throw malformed("unknown pcap magic");
  }
  auto u32 = [&](std::size_t at) {
    return swapped ? be::get32(b, at) : le::get32(b, at);
  };
  constexpr std::uint32_t kLinkEthernet = 1;
  if (u32(20) != kLinkEthernet) {
    throw Error(ErrorKind::format, "unsupported pcap link type " +
                                       std::to_string(u32(20)) +
                                       " (Ethernet only)");
  }

  CaptureContents out;
  std::size_t pos = 24;
  while (pos < b.size()) {
    if (pos + 16 > b.size()) throw malformed("truncated pcap record header");
    const std::uint64_t sec = u32(pos);
    const std::uint64_t frac = u32(pos + 4);
    const std::size_t incl = u32(pos + 8);
    pos += 16;
    if (pos + incl > b.size()) throw malformed("truncated pcap record");
    const ByteView frame = b.subspan(pos, incl);
    pos += incl;

    std::size_t ip = 14;
    if (frame.size() < ip) { ++out.skipped_non_udp; continue; }
    std::uint16_t ethertype = be::get16(frame, 12);
    if (ethertype == 0x8100 && frame.size() >= 18) {
      ethertype = be::get16(frame, 16);
      ip = 18;
    }
    if (ethertype != 0x0800 || frame.size() < ip + 20 ||
        (frame[ip] >> 4) != 4) {
      ++out.skipped_non_udp;
      continue;
    }
    const std::size_t ihl = (frame[ip] & 0x0F) * 4u;
    const std::uint16_t frag = be::get16(frame, ip + 6);
    if (frame[ip + 9] != 17 || (frag & 0x3FFF) != 0 || ihl < 20 ||
        frame.size() < ip + ihl + 8) {
      ++out.skipped_non_udp;
      continue;
    }
    const std::size_t udp = ip + ihl;
    const std::size_t udp_len = be::get16(frame, udp + 4);
    if (udp_len < 8 || udp + udp_len > frame.size()) {
      throw malformed("UDP length exceeds captured frame");
    }

    PacketRecord r;
    r.timestamp_us = sec * 1'000'000 + (nanos ? frac / 1000 : frac);
    r.endpoints.src_ip = be::get32(frame, ip + 12);
    r.endpoints.dst_ip = be::get32(frame, ip + 16);
    r.endpoints.src_port = be::get16(frame, udp);
    r.endpoints.dst_port = be::get16(frame, udp + 2);
    r.udp_checksum = be::get16(frame, udp + 6);
    try {
      r.rtp = parse_rtp(frame.subspan(udp + 8, udp_len - 8));
    } catch (const Error&) {
      ++out.skipped_non_rtp;
      continue;
    }
    out.records.push_back(std::move(r));
  }
  return out;
}

CaptureContents read_capture(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open '" + path.string() + "'");
  const Bytes raw((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (raw.size() >= 8 && std::equal(raw.begin(), raw.begin() + 8, kNativeMagic)) {
    return parse_native_capture(raw);
  }
  return parse_pcap(raw);
}

void write_capture(const std::vector<PacketRecord>& records,
                   const std::filesystem::path& path) {
  const Bytes bytes = encode_native_capture(records);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorKind::io, "failed writing '" + path.string() + "'");
}

}  // namespace transteg::rtp

#include <doctest.h>

#include <json.hpp>

#include "test_support.hpp"
#include "transteg/capture.hpp"
#include "transteg/error.hpp"
#include "transteg/rtp.hpp"

using namespace transteg;
using namespace transteg::rtp;

namespace {

std::uint32_t ipv4(const std::string& s) {
  unsigned a, b, c, d;
  std::sscanf(s.c_str(), "%u.%u.%u.%u", &a, &b, &c, &d);
  return a << 24 | b << 16 | c << 8 | d;
}

Bytes from_hex(const std::string& h) {
  Bytes out;
  for (std::size_t i = 0; i < h.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(h.substr(i, 2), nullptr, 16)));
  }
  return out;
}

RtpPacket sample_packet() {
  RtpPacket p;
  p.payload_type = 0;
  p.sequence_number = 65535;
  p.timestamp = 0xFFFFFF00;
  p.ssrc = 0xCAFEBABE;
  p.marker = true;
  p.payload = testing::random_bytes(160, 3);
  return p;
}

}  // namespace

TEST_CASE("RTP serialize/parse round trip") {
  const RtpPacket p = sample_packet();
  const Bytes wire = serialize_rtp(p);
  REQUIRE(wire.size() == kHeaderSize + 160);
  CHECK(wire[0] == 0x80);
  CHECK(wire[1] == 0x80);  // marker set, PT 0
  CHECK(parse_rtp(wire) == p);
}

TEST_CASE("RTP parser rejects what it does not carry") {
  Bytes wire = serialize_rtp(sample_packet());
  CHECK_THROWS_AS(parse_rtp(ByteView(wire).first(11)), Error);
  Bytes v1 = wire;
  v1[0] = 0x40;
  CHECK_THROWS_WITH_AS(parse_rtp(v1), doctest::Contains("version 1"), Error);
  Bytes csrc = wire;
  csrc[0] = 0x81;
  CHECK_THROWS_WITH_AS(parse_rtp(csrc), doctest::Contains("CSRC"), Error);
  Bytes ext = wire;
  ext[0] = 0x90;
  CHECK_THROWS_WITH_AS(parse_rtp(ext), doctest::Contains("extension"), Error);
}

TEST_CASE("UDP checksums match the RFC 768 oracle vectors") {
  std::ifstream in(testing::data_dir() / "udp_checksum_vectors.json");
  const auto vectors = nlohmann::json::parse(in);
  REQUIRE(vectors.size() >= 6);
  bool saw_ffff = false;
  for (const auto& v : vectors) {
    const PacketRecord rec =
        make_record(0, {ipv4(v["src"]), ipv4(v["dst"]), v["sport"], v["dport"]},
                    parse_rtp(from_hex(v["rtp_hex"])));
    CHECK(rec.udp_checksum == v["checksum"].get<int>());
    CHECK(checksum_valid(rec));
    saw_ffff = saw_ffff || rec.udp_checksum == 0xFFFF;
  }
  CHECK(saw_ffff);
}

TEST_CASE("checksum validity detects corruption; 0 means unchecked") {
  PacketRecord rec = make_record(5, {ipv4("10.0.0.1"), ipv4("10.0.0.2"), 1000, 2000}, sample_packet());
  CHECK(checksum_valid(rec));
  rec.rtp.payload[17] ^= 0x01;
  CHECK_FALSE(checksum_valid(rec));
  rec.udp_checksum = 0;
  CHECK(checksum_valid(rec));
  CHECK_THROWS_AS(udp_checksum(1, 2, Bytes(7)), Error);
}

TEST_CASE("ones-complement sum folds carries") {
  const Bytes b{0xFF, 0xFF, 0x00, 0x01};
  CHECK(ones_complement_sum(b) == 0x0001);
  const Bytes odd{0x12};
  CHECK(ones_complement_sum(odd) == 0x1200);
}

TEST_CASE("native capture round trip") {
  std::vector<PacketRecord> recs;
  for (int i = 0; i < 5; ++i) {
    RtpPacket p = sample_packet();
    p.sequence_number = static_cast<std::uint16_t>(i);
    recs.push_back(make_record(20000u * i, {ipv4("10.0.1.10"), ipv4("10.0.2.20"), 5004, 5006}, p));
  }
  const auto dir = testing::scratch("cap_rt");
  write_capture(recs, dir / "a.tscap");
  const CaptureContents c = read_capture(dir / "a.tscap");
  CHECK(c.records == recs);
  CHECK(parse_native_capture(encode_native_capture({})).records.empty());
}

TEST_CASE("truncated or unknown capture files are rejected") {
  std::vector<PacketRecord> recs{make_record(0, {1, 2, 3, 4}, sample_packet())};
  Bytes enc = encode_native_capture(recs);
  enc.resize(enc.size() - 3);
  CHECK_THROWS_AS(parse_native_capture(enc), Error);
  const auto dir = testing::scratch("cap_bad");
  std::ofstream(dir / "x.bin") << "definitely not a capture";
  CHECK_THROWS_AS(read_capture(dir / "x.bin"), Error);
  CHECK_THROWS_AS(read_capture(dir / "missing.bin"), Error);
}

namespace {

// Minimal pcap writer for Ethernet/IPv4/UDP frames (test-side).
Bytes pcap_file(const std::vector<Bytes>& frames, std::uint32_t linktype = 1) {
  Bytes out;
  auto p32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto p16 = [&](std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
  };
  p32(0xA1B2C3D4);
  p16(2);
  p16(4);
  p32(0);
  p32(0);
  p32(65535);
  p32(linktype);
  std::uint32_t t = 0;
  for (const auto& f : frames) {
    p32(t++);
    p32(0);
    p32(static_cast<std::uint32_t>(f.size()));
    p32(static_cast<std::uint32_t>(f.size()));
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

Bytes eth_ipv4(std::uint8_t proto, const Bytes& l4, bool vlan = false) {
  Bytes f(12, 0xAA);
  if (vlan) {
    f.insert(f.end(), {0x81, 0x00, 0x00, 0x05});
  }
  f.insert(f.end(), {0x08, 0x00});
  const std::size_t total = 20 + l4.size();
  Bytes ip{0x45, 0, static_cast<std::uint8_t>(total >> 8), static_cast<std::uint8_t>(total), 0, 0, 0x40, 0,
           64, proto, 0, 0, 10, 0, 1, 10, 10, 0, 2, 20};
  f.insert(f.end(), ip.begin(), ip.end());
  f.insert(f.end(), l4.begin(), l4.end());
  return f;
}

}  // namespace

TEST_CASE("pcap reader keeps UDP/RTP, skips the rest") {
  const PacketRecord rec = make_record(0, {ipv4("10.0.1.10"), ipv4("10.0.2.20"), 5004, 5006}, sample_packet());
  const Bytes udp = udp_segment(rec);
  Bytes not_rtp = udp;
  not_rtp[8] = 0x00;  // version 0
  const Bytes tcp(40, 0);
  const Bytes file = pcap_file({eth_ipv4(17, udp), eth_ipv4(6, tcp), eth_ipv4(17, not_rtp), eth_ipv4(17, udp, true)});
  const CaptureContents c = parse_pcap(file);
  REQUIRE(c.records.size() == 2);
  CHECK(c.skipped_non_udp == 1);
  CHECK(c.skipped_non_rtp == 1);
  CHECK(c.records[0].rtp == rec.rtp);
  CHECK(c.records[0].endpoints == rec.endpoints);
  CHECK(c.records[1].timestamp_us == 3000000);
  CHECK(checksum_valid(c.records[0]));
  CHECK_THROWS_AS(parse_pcap(pcap_file({}, 113)), Error);
}

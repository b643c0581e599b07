#include <doctest.h>

#include "test_support.hpp"
#include "transteg/error.hpp"
#include "transteg/transteg.hpp"

using namespace transteg;
using codec::g711_a;
using codec::g711_mu;
using codec::g726_32;

namespace {

std::vector<rtp::RtpPacket> g711_stream(std::size_t packets, std::uint16_t first_seq = 100,
                                        codec::Law law = codec::Law::mu) {
  const auto frames = audio::frame_stream(testing::tone(packets * audio::kFrameSamples, 523.0));
  std::vector<rtp::RtpPacket> out;
  for (std::size_t i = 0; i < packets; ++i) {
    rtp::RtpPacket p;
    p.payload_type = law == codec::Law::mu ? 0 : 8;
    p.sequence_number = static_cast<std::uint16_t>(first_seq + i);
    p.timestamp = static_cast<std::uint32_t>(i * 160);
    p.ssrc = 0x01020304;
    p.payload = codec::g711_encode(frames[i], law);
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("bandwidth identity") {
  CHECK(steg_bandwidth(160, 80, 50) == 32000);
  CHECK(steg_bandwidth(pair_for(g711_mu()), 50) == 32000);
  CHECK(steg_total_bytes(32000, 540) == 2160000);
  CHECK(steg_bandwidth(80, 160, 50) == 0);
  CHECK_THROWS_AS(steg_bandwidth(160, 80, 0), Error);
}

TEST_CASE("codec pairing") {
  CHECK(covert_map(g711_mu()).id == codec::CodecId::g726_32);
  CHECK(covert_map(g711_a()).id == codec::CodecId::g726_32);
  CHECK_THROWS_AS(covert_map(g726_32()), Error);
  CHECK_THROWS_WITH_AS(make_pair(g711_mu(), g711_mu()), doctest::Contains("capacity 0"), Error);
  CHECK(pair_for(g711_a()).capacity_bytes() == 80);
}

TEST_CASE("embed keeps header, PT and length; payload splits 80/80") {
  const CodecPair pair = pair_for(g711_mu());
  const Bytes secret = testing::random_bytes(500, 1);
  auto tx = StreamState::embedder(pair, frame_steganogram(secret, Compression::none), 3);
  auto rx = StreamState::extractor(pair, false);
  codec::AdpcmState reference;
  codec::TranscodeState shadow;
  for (const auto& p : g711_stream(10)) {
    const rtp::RtpPacket out = embed(p, tx);
    CHECK(out.payload_type == p.payload_type);
    CHECK(out.payload.size() == 160);
    CHECK(out.sequence_number == p.sequence_number);
    CHECK(out.timestamp == p.timestamp);
    CHECK(out.ssrc == p.ssrc);
    // first half is exactly the transcoded voice
    const Bytes voice = codec::transcode(p.payload, g711_mu(), g726_32(), shadow);
    CHECK(Bytes(out.payload.begin(), out.payload.begin() + 80) == voice);
    const Extracted ex = extract(out, rx);
    CHECK(ex.voice == voice);
  }
  CHECK(tx.packet_index == 10);
  CHECK(rx.stego.status() == StegoChannel::Status::complete);
  CHECK(rx.stego.payload() == secret);
}

TEST_CASE("embed rejects mismatched payloads and PTs") {
  const CodecPair pair = pair_for(g711_mu());
  auto tx = StreamState::embedder(pair, frame_steganogram({}, Compression::none), 3);
  auto p = g711_stream(1).front();
  p.payload.resize(159);
  CHECK_THROWS_WITH_AS(embed(p, tx), doctest::Contains("payload length mismatch"), Error);
  auto a = g711_stream(1, 0, codec::Law::a).front();
  CHECK_THROWS_WITH_AS(embed(a, tx), doctest::Contains("PT/codec mismatch"), Error);
  auto dyn = g711_stream(1).front();
  dyn.payload_type = 96;
  CHECK_THROWS_WITH_AS(embed(dyn, tx), doctest::Contains("unknown PT 96"), Error);
  auto rx = StreamState::extractor(pair, false);
  CHECK_THROWS_AS(embed(g711_stream(1).front(), rx), Error);
}

TEST_CASE("restore returns an overt stream with no channel in it") {
  const CodecPair pair = pair_for(g711_mu());
  const Bytes secret = testing::random_bytes(900, 2);
  auto tx = StreamState::embedder(pair, frame_steganogram(secret, Compression::deflate), 3);
  auto sr = StreamState::extractor(pair, false);
  auto after = StreamState::extractor(pair, false);
  for (const auto& p : g711_stream(20)) {
    const rtp::RtpPacket restored = restore(embed(p, tx), sr);
    CHECK(restored.payload.size() == 160);
    CHECK(restored.payload_type == 0);
    extract(restored, after);
  }
  CHECK(sr.stego.payload() == secret);
  CHECK(after.stego.status() == StegoChannel::Status::invalid);
}

TEST_CASE("masked session: bootstrap carries the key, rest is masked") {
  const CodecPair pair = pair_for(g711_mu());
  const Bytes key = testing::random_bytes(200, 8);  // 208 framed bytes -> 3 bootstrap packets
  const Bytes secret = testing::random_bytes(300, 9);
  auto tx = StreamState::embedder(pair, frame_steganogram(secret, Compression::none), 3, key);
  CHECK(tx.bootstrap_remaining == 3);
  auto rx = StreamState::extractor(pair, true);
  const auto stream = g711_stream(12);
  const MaskKey mk = *tx.mask_key;
  PacketIndexer sender_ix;
  std::size_t i = 0;
  for (auto p : stream) {
    // the overt sender masks past the bootstrap window
    const std::uint64_t idx = sender_ix.next(p.sequence_number);
    if (i >= 3) mask_in_place(p.payload, mk, p.ssrc, idx);
    const rtp::RtpPacket out = embed(p, tx);
    const Extracted ex = extract(out, rx);
    CHECK(ex.bootstrap == (i < 3));
    ++i;
  }
  CHECK(rx.session_key == key);
  CHECK(rx.stego.payload() == secret);
}

TEST_CASE("short session keys are refused") {
  const CodecPair pair = pair_for(g711_mu());
  CHECK_THROWS_AS(StreamState::embedder(pair, frame_steganogram({}, Compression::none), 1, Bytes(15)), Error);
}

TEST_CASE("role steps: transcode counts and misuse") {
  const CodecPair pair = pair_for(g711_mu());
  const Bytes framed = frame_steganogram({}, Compression::none);
  auto s1 = StreamState::embedder(pair, framed, 1);
  auto s1r = StreamState::extractor(pair, false);
  auto mid = StreamState::embedder(pair, framed, 1);
  auto midr = StreamState::extractor(pair, false);
  const audio::PcmFrame voice = audio::frame_stream(testing::tone(160))[0];
  rtp::RtpPacket hdr;
  hdr.payload_type = 0;

  const RoleOutput a = role_step(Role::s1_sender, {hdr, voice}, s1);
  CHECK(a.transcodes == 0);
  REQUIRE(a.packet);
  CHECK(a.packet->payload.size() == 160);
  const RoleOutput b = role_step(Role::s1_receiver, {*a.packet, std::nullopt}, s1r);
  CHECK(b.transcodes == 0);
  CHECK(b.voice.has_value());
  CHECK_FALSE(b.packet.has_value());

  const auto p = g711_stream(1).front();
  const RoleOutput c = role_step(Role::intermediate_embedder, {p, std::nullopt}, mid);
  CHECK(c.transcodes == 1);
  const RoleOutput d = role_step(Role::intermediate_restorer, {*c.packet, std::nullopt}, midr);
  CHECK(d.transcodes == 1);
  CHECK(d.packet->payload.size() == 160);

  CHECK_THROWS_WITH_AS(role_step(Role::s1_sender, {hdr, std::nullopt}, s1), doctest::Contains("role/packet mismatch"), Error);
  CHECK_THROWS_WITH_AS(role_step(Role::intermediate_embedder, {p, voice}, mid), doctest::Contains("role/packet mismatch"), Error);
  CHECK_THROWS_AS(role_step(Role::intermediate_restorer, {p, std::nullopt}, mid), Error);
}

TEST_CASE("property: embed/extract round trip over random sizes and seeds") {
  std::mt19937_64 rng(2024);
  const CodecPair pair = pair_for(g711_a());
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = rng() % 3000;
    const Compression c = rng() % 2 ? Compression::deflate : Compression::none;
    const Bytes secret = testing::random_bytes(n, rng());
    const Bytes framed = frame_steganogram(secret, c);
    const std::size_t packets = framed.size() / 80 + 1 + rng() % 5;
    const std::uint16_t seq0 = static_cast<std::uint16_t>(rng());
    auto tx = StreamState::embedder(pair, framed, rng());
    auto rx = StreamState::extractor(pair, false);
    for (const auto& p : g711_stream(packets, seq0, codec::Law::a)) extract(embed(p, tx), rx);
    REQUIRE(rx.stego.status() == StegoChannel::Status::complete);
    CHECK(rx.stego.payload() == secret);
  }
}

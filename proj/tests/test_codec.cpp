#include <doctest.h>

#include <cstring>

#include "test_support.hpp"
#include "transteg/codec.hpp"
#include "transteg/error.hpp"
#include "transteg/fixtures.hpp"

using namespace transteg;
using namespace transteg::codec;

namespace {

std::vector<std::int16_t> s16(const Bytes& b) {
  std::vector<std::int16_t> out(b.size() / 2);
  std::memcpy(out.data(), b.data(), out.size() * 2);
  return out;
}

}  // namespace

TEST_CASE("G.711 decode tables match the oracle") {
  for (Law law : {Law::mu, Law::a}) {
    const auto table = s16(testing::read_bytes(
        testing::data_dir() / (law == Law::mu ? "g711/ulaw_decode.bin" : "g711/alaw_decode.bin")));
    REQUIRE(table.size() == 256);
    for (int c = 0; c < 256; ++c) CHECK(expand(static_cast<std::uint8_t>(c), law) == table[c]);
  }
}

TEST_CASE("G.711 encode matches the oracle for every 16-bit input") {
  for (Law law : {Law::mu, Law::a}) {
    const Bytes table = testing::read_bytes(
        testing::data_dir() / (law == Law::mu ? "g711/ulaw_encode.bin" : "g711/alaw_encode.bin"));
    REQUIRE(table.size() == 65536);
    int bad = 0;
    for (int x = -32768; x < 32768; ++x) {
      bad += compress(static_cast<std::int16_t>(x), law) != table[x + 32768];
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("G.711 code-level idempotence, all codes, both laws") {
  for (Law law : {Law::mu, Law::a}) {
    for (int c = 0; c < 256; ++c) {
      const auto code = static_cast<std::uint8_t>(c);
      const std::uint8_t again = compress(expand(code, law), law);
      // mu-law 0x7F and 0xFF both decode to 0; 0 re-encodes as 0xFF
      if (law == Law::mu && c == 0x7F) {
        CHECK(again == 0xFF);
      } else {
        CHECK(again == code);
      }
    }
  }
}

TEST_CASE("G.711 frames: 160 bytes, wrong sizes rejected") {
  const auto frames = audio::frame_stream(testing::tone(160));
  CHECK(g711_encode(frames[0], Law::mu).size() == 160);
  CHECK_THROWS_AS(g711_decode(Bytes(159), Law::mu), Error);
  CHECK_THROWS_AS(g711_decode(Bytes(161), Law::a), Error);
}

TEST_CASE("G.726 reset-state encoder and decoder match the reference vectors") {
  for (const char* name : {"ramp", "sine", "noise", "extremes", "ulaw_chirp"}) {
    CAPTURE(name);
    const auto pcm = s16(testing::read_bytes(testing::data_dir() / "g726" / (std::string(name) + ".pcm")));
    const Bytes codes = testing::read_bytes(testing::data_dir() / "g726" / (std::string(name) + ".g726"));
    const auto dec = s16(testing::read_bytes(testing::data_dir() / "g726" / (std::string(name) + ".dec")));
    REQUIRE(pcm.size() % audio::kFrameSamples == 0);

    AdpcmState enc;
    AdpcmState decs;
    Bytes got;
    std::vector<std::int16_t> got_dec;
    for (std::size_t f = 0; f < pcm.size() / audio::kFrameSamples; ++f) {
      audio::PcmFrame frame;
      std::copy_n(pcm.begin() + static_cast<long>(f * audio::kFrameSamples), audio::kFrameSamples, frame.begin());
      const Bytes part = g726_encode(frame, enc);
      got.insert(got.end(), part.begin(), part.end());
      const auto back = g726_decode(ByteView(codes).subspan(f * kG726FrameBytes, kG726FrameBytes), decs);
      got_dec.insert(got_dec.end(), back.begin(), back.end());
    }
    CHECK(got == codes);
    CHECK(got_dec == dec);
  }
}

TEST_CASE("G.726 decoder matches the reference on arbitrary codes") {
  const Bytes codes = testing::read_bytes(testing::data_dir() / "g726/random.g726");
  const auto dec = s16(testing::read_bytes(testing::data_dir() / "g726/random.dec"));
  AdpcmState st;
  std::vector<std::int16_t> got;
  for (std::size_t off = 0; off < codes.size(); off += kG726FrameBytes) {
    const auto f = g726_decode(ByteView(codes).subspan(off, kG726FrameBytes), st);
    got.insert(got.end(), f.begin(), f.end());
  }
  CHECK(got == dec);
}

TEST_CASE("G.726 packs the first sample into the low nibble") {
  AdpcmState a, b;
  audio::PcmFrame frame{};
  frame[0] = 12000;
  const Bytes out = g726_encode(frame, a);
  CHECK((out[0] & 0x0F) == b.encode(12000));
  CHECK(g726_encode(frame, a).size() == kG726FrameBytes);
  CHECK_THROWS_AS(g726_decode(Bytes(79), a), Error);
}

TEST_CASE("codec registry and PT lookup") {
  CHECK(g711_mu().payload_type == 0);
  CHECK(g711_a().payload_type == 8);
  CHECK(g726_32().bytes_per_frame == 80);
  CHECK(codec_by_name("G.711u")->id == CodecId::g711_mu);
  CHECK(codec_by_name("PCMA")->id == CodecId::g711_a);
  CHECK(codec_by_name("g726-32")->id == CodecId::g726_32);
  CHECK_FALSE(codec_by_name("opus"));
  CHECK_THROWS_AS(require_codec("opus"), Error);
  CHECK(codec_lookup(0).id == CodecId::g711_mu);
  CHECK(codec_lookup(8).id == CodecId::g711_a);
  try {
    codec_lookup(96);
    FAIL("PT 96 without mapping accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("unknown PT 96") != std::string::npos);
  }
  DynamicPtMap map{{96, g726_32(96)}};
  CHECK(codec_lookup(96, map).id == CodecId::g726_32);
}

TEST_CASE("transcode G.711 <-> G.726 keeps frame sizes") {
  const auto frames = audio::frame_stream(testing::tone(1600));
  TranscodeState st;
  for (const auto& f : frames) {
    const Bytes mu = g711_encode(f, Law::mu);
    const Bytes covert = transcode(mu, g711_mu(), g726_32(), st);
    CHECK(covert.size() == 80);
    CHECK(transcode(covert, g726_32(), g711_mu(), st).size() == 160);
  }
  CHECK_THROWS_AS(transcode(Bytes(160), g711_mu(), g711_a(), st), Error);
}

TEST_CASE("segmental SNR basics") {
  const auto s = testing::tone(8000);
  CHECK(segmental_snr(s.samples, s.samples) == doctest::Approx(35.0));
  std::vector<std::int16_t> zero(8000, 0);
  CHECK(segmental_snr(s.samples, zero) == doctest::Approx(0.0));
  CHECK(segmental_snr(zero, zero) == 0.0);  // nothing active
}

TEST_CASE("segmental SNR of the tandem chain equals the oracle's per-fixture value" *
          doctest::skip(!std::filesystem::exists(testing::fixture_dir() / "speech_01.wav"))) {
  std::ifstream in(testing::data_dir() / "segsnr_oracle.txt");
  std::string name;
  double expected = 0;
  int seen = 0;
  while (in >> name >> expected) {
    if (name == "threshold") break;
    const auto pcm = audio::read_wav(testing::fixture_dir() / name);
    TranscodeState st;
    std::vector<audio::PcmFrame> out;
    for (const auto& f : audio::frame_stream(pcm)) {
      const Bytes covert = transcode(g711_encode(f, Law::mu), g711_mu(), g726_32(), st);
      out.push_back(g711_decode(transcode(covert, g726_32(), g711_mu(), st), Law::mu));
    }
    const auto deg = audio::unframe(out, pcm.samples.size());
    CHECK(segmental_snr(pcm.samples, deg.samples) == doctest::Approx(expected).epsilon(1e-6));
    ++seen;
  }
  CHECK(seen == fixtures::kSpeechFixtures);
}

#include <doctest.h>

#include <json.hpp>

#include "test_support.hpp"
#include "transteg/error.hpp"
#include "transteg/masking.hpp"
#include "transteg/stego_channel.hpp"

using namespace transteg;

TEST_CASE("header layout is little-endian length, compression, version, reserved") {
  const Bytes h = encode_header({0x01020304, Compression::deflate, 1, 0});
  CHECK(h == Bytes{0x04, 0x03, 0x02, 0x01, 0x01, 0x01, 0x00, 0x00});
  CHECK(decode_header(h)->length == 0x01020304);
  Bytes bad = h;
  bad[5] = 2;
  CHECK_FALSE(decode_header(bad));
  bad = h;
  bad[6] = 1;
  CHECK_FALSE(decode_header(bad));
  bad = h;
  bad[4] = 2;
  CHECK_FALSE(decode_header(bad));
  CHECK_FALSE(decode_header(ByteView(h).first(7)));
}

TEST_CASE("frame/unframe round trip, raw and deflate") {
  const Bytes text(5000, 'a');
  for (Compression c : {Compression::none, Compression::deflate}) {
    const Bytes f = frame_steganogram(text, c);
    CHECK(unframe_steganogram(f) == text);
  }
  CHECK(frame_steganogram(text, Compression::deflate).size() < 200);
  CHECK(unframe_steganogram(frame_steganogram({}, Compression::none)).empty());
  CHECK_THROWS_AS(unframe_steganogram(Bytes(4)), Error);
}

TEST_CASE("corrupt deflate body is a format error") {
  Bytes f = frame_steganogram(Bytes(1000, 'x'), Compression::deflate);
  for (std::size_t i = kChannelHeaderSize; i < f.size(); ++i) f[i] ^= 0x5A;
  try {
    unframe_steganogram(f);
    FAIL("accepted corrupt body");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::format);
  }
}

TEST_CASE("channel chunks reassemble for any capacity") {
  const Bytes data = testing::random_bytes(1234, 9);
  for (std::size_t cap : {1u, 3u, 8u, 80u, 2000u}) {
    CAPTURE(cap);
    auto tx = StegoChannel::for_embedding(frame_steganogram(data, Compression::none), 5);
    auto rx = StegoChannel::for_extraction();
    Bytes got_chunks;
    while (rx.status() == StegoChannel::Status::pending) {
      const Bytes chunk = tx.next_chunk(cap);
      REQUIRE(chunk.size() == cap);
      const Bytes part = rx.accept_chunk(chunk);
      got_chunks.insert(got_chunks.end(), part.begin(), part.end());
    }
    CHECK(rx.status() == StegoChannel::Status::complete);
    CHECK(rx.payload() == data);
    CHECK(got_chunks.size() == data.size() + kChannelHeaderSize);
    CHECK(tx.exhausted());
    CHECK(rx.accept_chunk(tx.next_chunk(cap)).empty());  // filler is dropped
  }
}

TEST_CASE("filler is deterministic by seed") {
  auto a = StegoChannel::for_embedding(frame_steganogram({}, Compression::none), 77);
  auto b = StegoChannel::for_embedding(frame_steganogram({}, Compression::none), 77);
  auto c = StegoChannel::for_embedding(frame_steganogram({}, Compression::none), 78);
  const Bytes fa = a.next_chunk(100), fb = b.next_chunk(100), fc = c.next_chunk(100);
  CHECK(fa == fb);
  CHECK(fa != fc);
}

TEST_CASE("extractor goes invalid on a non-channel stream and stays there") {
  auto rx = StegoChannel::for_extraction();
  rx.accept_chunk(Bytes(80, 0xFF));
  CHECK(rx.status() == StegoChannel::Status::invalid);
  CHECK(rx.accept_chunk(frame_steganogram({}, Compression::none)).empty());
  CHECK_THROWS_AS(rx.payload(), Error);
}

TEST_CASE("direction misuse throws") {
  auto tx = StegoChannel::for_embedding(frame_steganogram({}, Compression::none), 1);
  auto rx = StegoChannel::for_extraction();
  CHECK_THROWS_AS(tx.accept_chunk(Bytes(8)), Error);
  CHECK_THROWS_AS(rx.next_chunk(8), Error);
  CHECK_THROWS_AS(StegoChannel::for_embedding(Bytes(3), 1), Error);
}

TEST_CASE("keystream matches the AES-CTR oracle") {
  std::ifstream in(testing::data_dir() / "mask_keystream_kat.json");
  for (const auto& v : nlohmann::json::parse(in)) {
    MaskKey key{};
    const std::string kh = v["key"];
    for (std::size_t i = 0; i < 16; ++i) key[i] = static_cast<std::uint8_t>(std::stoi(kh.substr(2 * i, 2), nullptr, 16));
    const std::string ks = v["keystream"];
    Bytes expected;
    for (std::size_t i = 0; i < ks.size(); i += 2) {
      expected.push_back(static_cast<std::uint8_t>(std::stoi(ks.substr(i, 2), nullptr, 16)));
    }
    CHECK(keystream(key, v["ssrc"], v["index"], expected.size()) == expected);
  }
}

TEST_CASE("mask is an involution and depends on ssrc and index") {
  MaskKey key{};
  key[0] = 1;
  const Bytes region = testing::random_bytes(80, 4);
  const Bytes m = mask(region, key, 10, 20);
  CHECK(m != region);
  CHECK(mask(m, key, 10, 20) == region);
  CHECK(mask(region, key, 11, 20) != m);
  CHECK(mask(region, key, 10, 21) != m);
  CHECK(mask({}, key, 1, 1).empty());
}

TEST_CASE("packet indexer counts sequence rollovers") {
  PacketIndexer ix;
  CHECK(ix.next(65534) == 65534);
  CHECK(ix.next(65535) == 65535);
  CHECK(ix.next(0) == 65536);
  CHECK(ix.next(1) == 65537);
  CHECK(ix.next(0) == 65536);  // mild reordering does not roll back the counter
}

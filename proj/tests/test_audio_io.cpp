#include <doctest.h>

#include <fstream>

#include "test_support.hpp"
#include "transteg/audio_io.hpp"
#include "transteg/error.hpp"

using namespace transteg;
using namespace transteg::audio;

TEST_CASE("reads the wave-module ramp sample for sample") {
  const PcmStream s = read_wav(testing::data_dir() / "wav/ramp1603.wav");
  REQUIRE(s.samples.size() == 1603);
  CHECK(s.sample_rate == 8000);
  CHECK(s.channels == 1);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    REQUIRE(s.samples[i] == static_cast<int>(20 * i) - 16000);
  }
}

TEST_CASE("ramp frames into 11 packets with a zero-padded tail") {
  const PcmStream s = read_wav(testing::data_dir() / "wav/ramp1603.wav");
  const auto frames = frame_stream(s);
  REQUIRE(frames.size() == 11);
  CHECK(frames[10][2] == s.samples[1602]);
  for (std::size_t i = 3; i < kFrameSamples; ++i) CHECK(frames[10][i] == 0);
  CHECK(unframe(frames, s.samples.size()).samples == s.samples);
}

TEST_CASE("empty stream gives no frames") {
  CHECK(frame_stream(PcmStream{}).empty());
}

TEST_CASE("unsupported formats are named") {
  auto msg = [](const char* name) {
    try {
      read_wav(testing::data_dir() / "wav" / name);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(msg("stereo.wav").find("channel count 2") != std::string::npos);
  CHECK(msg("rate16k.wav").find("sample rate") != std::string::npos);
  CHECK(msg("width8.wav").find("sample width") != std::string::npos);
}

TEST_CASE("malformed files are input errors") {
  const auto dir = testing::scratch("wav_bad");
  {
    std::ofstream(dir / "short.wav") << "RIFF";
  }
  {
    std::ofstream(dir / "notwav.wav") << "RIFF\x10\x00\x00\x00WAVEjunkjunk";
  }
  for (const char* n : {"short.wav", "notwav.wav", "missing.wav"}) {
    try {
      read_wav(dir / n);
      FAIL("accepted " << n);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::input);
    }
  }
}

TEST_CASE("write then read round-trips") {
  const auto dir = testing::scratch("wav_rt");
  PcmStream s = testing::tone(1234);
  s.samples.push_back(-32768);
  s.samples.push_back(32767);
  write_wav(s, dir / "t.wav");
  CHECK(read_wav(dir / "t.wav").samples == s.samples);
  CHECK(std::filesystem::file_size(dir / "t.wav") == 44 + 2 * s.samples.size());
}

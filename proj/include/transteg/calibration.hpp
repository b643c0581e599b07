#pragma once

#include <string>
#include <vector>

#include "transteg/audio_io.hpp"
#include "transteg/simulator.hpp"
#include "transteg/warden.hpp"

namespace transteg::calib {

/// Taps of the four S4 runs made per fixture.
struct FixtureRuns {
  std::map<int, std::vector<rtp::PacketRecord>> clean;      // empty steganogram
  std::map<int, std::vector<rtp::PacketRecord>> clean_alt;  // same, other filler seed
  std::map<int, std::vector<rtp::PacketRecord>> raw;        // raw text steganogram
  std::map<int, std::vector<rtp::PacketRecord>> deflate;    // deflated text
};

struct FixtureMetrics {
  std::string fixture;
  double clean_vs_clean = 0;    // tap 2, filler seeds differ
  double clean_vs_raw = 0;      // tap 2
  double clean_vs_deflate = 0;  // tap 2
  double min_format_12 = 0;     // smallest tap 1 vs 2 over all runs
  double min_format_23 = 0;
  double max_artifact_13 = 0;   // largest tap 1 vs 3 over all runs
};

struct Calibration {
  warden::Policy policy;
  std::vector<FixtureMetrics> fixtures;
  /// Smallest clean_vs_raw / clean_vs_deflate ratio over the fixtures.
  double min_raw_deflate_ratio = 0;
};

inline constexpr std::size_t kCalibrationPackets = 1500;
/// Tap 1 vs 3 threshold as a multiple of the largest codec artifact seen.
inline constexpr double kArtifactBandFactor = 1.5;

/// Longest text prefix whose deflated form fits `budget` bytes.
Bytes deflate_fit(ByteView text, std::size_t budget);

/// Channel bytes available to the steganogram body over `packets`.
std::size_t body_budget(const CodecPair& pair, std::size_t packets);

/// Filler seeds are seed_base + 1..4.
FixtureRuns run_fixture(const audio::PcmStream& voice, ByteView text,
                        std::uint64_t seed_base,
                        std::size_t packets = kCalibrationPackets);

FixtureMetrics measure(const FixtureRuns& runs, warden::Metric metric);

/// Thresholds from the fixture populations; see README for the rules.
Calibration calibrate(const std::vector<audio::PcmStream>& voices,
                      const std::vector<std::string>& names, ByteView text,
                      warden::Metric metric = warden::Metric::total_variation);

}  // namespace transteg::calib

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "transteg/audio_io.hpp"
#include "transteg/capture.hpp"
#include "transteg/transteg.hpp"
#include "transteg/warden.hpp"

namespace transteg::sim {

enum class Scenario { s1, s2, s3, s4 };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

/// Observation points: 1 before the SS, 2 after the SS, 3 after the SR.
enum class Tap { before_ss = 1, after_ss = 2, after_sr = 3 };

std::vector<int> valid_taps(Scenario s);

enum class StageKind {
  sender,
  sender_embedder,
  intermediate_embedder,
  intermediate_restorer,
  receiver_extractor,
  receiver,
};

std::string stage_name(StageKind kind);
bool is_transteg_stage(StageKind kind);

/// Ordered pipeline, sender first.
std::vector<StageKind> place_nodes(Scenario s);

/// Transcoding operations each packet goes through.
int expected_transcodes(Scenario s);

struct ScenarioConfig {
  Scenario scenario = Scenario::s4;
  std::vector<std::filesystem::path> wav_inputs;
  /// In-memory voice; used instead of wav_inputs when set.
  std::optional<audio::PcmStream> pcm;
  CodecPair codec_pair = pair_for(codec::g711_mu());
  /// Session key for SRTP-style masking (16+ bytes).
  std::optional<Bytes> mask_key;
  std::optional<std::filesystem::path> stego_input;
  /// In-memory steganogram; used instead of stego_input when set.
  std::optional<Bytes> stego_data;
  Compression compression = Compression::none;
  std::uint64_t filler_seed = 1;
  /// 0 = take the length of the voice input (or duration_s when set).
  std::size_t packet_count = 0;
  double duration_s = 0.0;
  std::vector<int> taps;
  /// Tap captures land here as tap<N>.tscap when set.
  std::optional<std::filesystem::path> capture_dir;
  std::optional<std::filesystem::path> receiver_wav;
  std::uint32_t ssrc = 0x2F6A11C4;
  std::uint16_t first_sequence = 4711;
  std::uint32_t first_timestamp = 160000;
  rtp::Endpoints endpoints{0x0A00010A, 0x0A000214, 5004, 5006};
};

/// Throws ErrorKind::usage for bad combinations, ErrorKind::input for
/// missing input files. Nothing is read or written.
void validate(const ScenarioConfig& config);

struct TimingStats {
  std::size_t count = 0;
  double total_us = 0.0;
  double mean_us = 0.0;
  double stddev_us = 0.0;
  double max_us = 0.0;
};

TimingStats summarize(const std::vector<double>& samples_us);

struct StageTiming {
  std::string stage;
  bool transteg = false;
  TimingStats stats;
};

/// Times `stage` on every packet with a monotonic clock.
template <typename Stage>
TimingStats measure_processing(Stage&& stage,
                               const std::vector<rtp::RtpPacket>& packets);

struct CallReport {
  std::string scenario;
  std::vector<std::string> stages;
  std::size_t packets_sent = 0;
  std::size_t stego_bytes_offered = 0;    // steganogram file size
  std::size_t stego_bytes_delivered = 0;  // channel body bytes received
  double goodput_bit_s = 0.0;
  std::uint64_t steg_bandwidth_bit_s = 0;
  int transcode_count = 0;  // per packet
  bool extraction_ok = false;
  bool voice_continuity_ok = false;
  std::size_t input_samples = 0;
  std::size_t receiver_samples = 0;
  std::vector<StageTiming> per_stage_processing_us;
  TimingStats passthrough_us;
  double added_us_per_packet = 0.0;
  std::map<int, warden::ByteHistogram> tap_histograms;
  std::map<int, std::vector<rtp::PacketRecord>> tap_captures;
  Bytes recovered;
  std::vector<std::string> invariant_failures;

  bool ok() const { return extraction_ok && invariant_failures.empty(); }
};

CallReport run_call(const ScenarioConfig& config);

/// Independent calls on a worker pool. Reports come back in input order.
std::vector<CallReport> run_calls(const std::vector<ScenarioConfig>& configs,
                                  unsigned workers = 0);

struct AggregateReport {
  std::size_t calls = 0;
  double goodput_bit_s = 0.0;
  std::size_t stego_bytes_delivered = 0;
  bool all_ok = true;
};

/// Sums goodput over concurrent calls.
AggregateReport aggregate(const std::vector<CallReport>& reports);

/// Report document, "schema": 1. Timing fields under "processing".
nlohmann::json report_json(const CallReport& report);

}  // namespace transteg::sim

#include <chrono>

namespace transteg::sim {

template <typename Stage>
TimingStats measure_processing(Stage&& stage,
                               const std::vector<rtp::RtpPacket>& packets) {
  std::vector<double> samples;
  samples.reserve(packets.size());
  for (const auto& p : packets) {
    const auto t0 = std::chrono::steady_clock::now();
    stage(p);
    const auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  return summarize(samples);
}

}  // namespace transteg::sim

#include "transteg/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <thread>

#include "transteg/error.hpp"

namespace transteg::sim {

namespace fs = std::filesystem;

Scenario scenario_from_name(const std::string& name) {
  std::string n = name;
  std::transform(n.begin(), n.end(), n.begin(), ::tolower);
  if (n == "s1") return Scenario::s1;
  if (n == "s2") return Scenario::s2;
  if (n == "s3") return Scenario::s3;
  if (n == "s4") return Scenario::s4;
  throw Error(ErrorKind::usage, "unknown scenario " + name + " (S1..S4)");
}

std::string scenario_name(Scenario s) {
  return "S" + std::to_string(static_cast<int>(s) + 1);
}

std::vector<int> valid_taps(Scenario s) {
  switch (s) {
    case Scenario::s1: return {2};
    case Scenario::s2: return {2, 3};
    case Scenario::s3: return {1, 2};
    case Scenario::s4: return {1, 2, 3};
  }
  return {};
}

std::string stage_name(StageKind kind) {
  switch (kind) {
    case StageKind::sender: return "sender";
    case StageKind::sender_embedder: return "sender-embedder";
    case StageKind::intermediate_embedder: return "intermediate-embedder";
    case StageKind::intermediate_restorer: return "intermediate-restorer";
    case StageKind::receiver_extractor: return "receiver-extractor";
    case StageKind::receiver: return "receiver";
  }
  return "?";
}

bool is_transteg_stage(StageKind kind) {
  return kind != StageKind::sender && kind != StageKind::receiver;
}

std::vector<StageKind> place_nodes(Scenario s) {
  using K = StageKind;
  switch (s) {
    case Scenario::s1: return {K::sender_embedder, K::receiver_extractor};
    case Scenario::s2: return {K::sender_embedder, K::intermediate_restorer, K::receiver};
    case Scenario::s3: return {K::sender, K::intermediate_embedder, K::receiver_extractor};
    case Scenario::s4:
      return {K::sender, K::intermediate_embedder, K::intermediate_restorer, K::receiver};
  }
  return {};
}

int expected_transcodes(Scenario s) {
  switch (s) {
    case Scenario::s1: return 0;
    case Scenario::s2:
    case Scenario::s3: return 1;
    case Scenario::s4: return 2;
  }
  return 0;
}

void validate(const ScenarioConfig& config) {
  if (config.scenario == Scenario::s4 && config.mask_key) {
    throw Error(ErrorKind::usage,
                "S4 with SRTP masking prevents TranSteg: both steganogram nodes sit "
                "between the encrypting endpoints and cannot rewrite the payload");
  }
  if (config.mask_key && config.mask_key->size() < 16) {
    throw Error(ErrorKind::usage, "mask key needs at least 16 bytes");
  }
  const auto allowed = valid_taps(config.scenario);
  for (int t : config.taps) {
    if (std::find(allowed.begin(), allowed.end(), t) == allowed.end()) {
      throw Error(ErrorKind::usage, "tap " + std::to_string(t) + " does not exist in " +
                                        scenario_name(config.scenario));
    }
  }
  if (config.codec_pair.capacity_bytes() == 0 ||
      config.codec_pair.covert.bytes_per_frame >= config.codec_pair.overt.bytes_per_frame) {
    throw Error(ErrorKind::usage, "codec pair leaves no stego capacity");
  }
  if (config.duration_s < 0.0) throw Error(ErrorKind::usage, "negative duration");
  if (!config.pcm) {
    if (config.wav_inputs.empty()) throw Error(ErrorKind::usage, "no voice input given");
    for (const auto& p : config.wav_inputs) {
      if (!fs::is_regular_file(p)) throw Error(ErrorKind::input, "cannot read WAV " + p.string());
    }
  }
  if (!config.stego_data && config.stego_input && !fs::is_regular_file(*config.stego_input)) {
    throw Error(ErrorKind::input, "cannot read steganogram " + config.stego_input->string());
  }
  if (config.capture_dir && fs::exists(*config.capture_dir) &&
      !fs::is_directory(*config.capture_dir)) {
    throw Error(ErrorKind::input, "capture dir is not a directory: " +
                                      config.capture_dir->string());
  }
}

TimingStats summarize(const std::vector<double>& samples_us) {
  TimingStats s;
  s.count = samples_us.size();
  if (s.count == 0) return s;
  for (double v : samples_us) {
    s.total_us += v;
    s.max_us = std::max(s.max_us, v);
  }
  s.mean_us = s.total_us / static_cast<double>(s.count);
  double var = 0.0;
  for (double v : samples_us) var += (v - s.mean_us) * (v - s.mean_us);
  s.stddev_us = std::sqrt(var / static_cast<double>(s.count));
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

audio::PcmStream load_voice(const ScenarioConfig& config) {
  if (config.pcm) return *config.pcm;
  audio::PcmStream all;
  for (const auto& p : config.wav_inputs) {
    audio::PcmStream s = audio::read_wav(p);
    all.samples.insert(all.samples.end(), s.samples.begin(), s.samples.end());
  }
  return all;
}

// One node of the call. Plain endpoints still take part in masking: they
// are the SRTP endpoints and share the session key.
struct Stage {
  StageKind kind;
  std::optional<StreamState> state;
  codec::TranscodeState codec_state;
  PacketIndexer indexer;
  std::vector<double> times_us;
  int transcodes = 0;
};

std::size_t bootstrap_packets(const ScenarioConfig& c) {
  if (!c.mask_key) return 0;
  const std::size_t cap = c.codec_pair.capacity_bytes();
  return (kChannelHeaderSize + c.mask_key->size() + cap - 1) / cap;
}

MaskKey key_of(const Bytes& session_key) {
  MaskKey k;
  std::copy_n(session_key.begin(), k.size(), k.begin());
  return k;
}

Error staged(const Stage& st, std::size_t packet, const Error& e) {
  return Error(e.kind(), "stage " + stage_name(st.kind) + ", packet " +
                             std::to_string(packet) + ": " + e.what());
}

}  // namespace

CallReport run_call(const ScenarioConfig& config) {
  validate(config);

  const audio::PcmStream voice = load_voice(config);
  Bytes stego;
  if (config.stego_data) {
    stego = *config.stego_data;
  } else if (config.stego_input) {
    stego = read_file(*config.stego_input);
  }

  std::size_t packets = config.packet_count;
  std::size_t input_samples = voice.samples.size();
  if (packets == 0 && config.duration_s > 0.0) {
    packets = static_cast<std::size_t>(std::llround(config.duration_s * 50.0));
  }
  if (packets == 0) {
    packets = (voice.samples.size() + audio::kFrameSamples - 1) / audio::kFrameSamples;
  } else {
    input_samples = packets * audio::kFrameSamples;
  }
  if (packets > 0 && voice.samples.empty()) {
    throw Error(ErrorKind::input, "voice input holds no samples");
  }
  const auto frames = audio::frame_stream(voice);

  const CodecPair& pair = config.codec_pair;
  const bool masked = config.mask_key.has_value();
  const std::size_t boot = bootstrap_packets(config);
  const Bytes framed = frame_steganogram(stego, config.compression);

  std::vector<Stage> stages;
  for (StageKind kind : place_nodes(config.scenario)) {
    Stage st{kind, std::nullopt, {}, {}, {}, 0};
    switch (kind) {
      case StageKind::sender_embedder:
      case StageKind::intermediate_embedder:
        st.state = StreamState::embedder(pair, framed, config.filler_seed, config.mask_key);
        break;
      case StageKind::intermediate_restorer:
      case StageKind::receiver_extractor:
        st.state = StreamState::extractor(pair, masked);
        break;
      default:
        break;
    }
    st.times_us.reserve(packets);
    stages.push_back(std::move(st));
  }

  // Tap index -> stage index whose output it observes.
  std::map<int, std::size_t> tap_stage;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    switch (stages[i].kind) {
      case StageKind::sender:
        tap_stage[1] = i;
        break;
      case StageKind::sender_embedder:
      case StageKind::intermediate_embedder:
        tap_stage[2] = i;
        break;
      case StageKind::intermediate_restorer:
        tap_stage[3] = i;
        break;
      default:
        break;
    }
  }

  CallReport report;
  report.scenario = scenario_name(config.scenario);
  for (const auto& st : stages) report.stages.push_back(stage_name(st.kind));
  for (int t : config.taps) {
    report.tap_captures[t].reserve(packets);
    report.tap_histograms[t].tap_id = "tap" + std::to_string(t);
  }

  std::vector<audio::PcmFrame> received;
  received.reserve(packets);
  std::vector<double> passthrough;
  passthrough.reserve(packets);
  int max_transcodes = 0;
  int min_transcodes = 1 << 20;

  for (std::size_t i = 0; i < packets; ++i) {
    const audio::PcmFrame& frame = frames[i % frames.size()];
    rtp::RtpPacket header;
    header.payload_type = static_cast<std::uint8_t>(pair.overt.payload_type);
    header.sequence_number = static_cast<std::uint16_t>(config.first_sequence + i);
    header.timestamp = static_cast<std::uint32_t>(config.first_timestamp +
                                                  i * audio::kFrameSamples);
    header.ssrc = config.ssrc;
    header.marker = i == 0;
    const std::uint64_t ts_us = i * 20000;

    rtp::RtpPacket packet = header;
    int transcodes = 0;
    for (std::size_t s = 0; s < stages.size(); ++s) {
      Stage& st = stages[s];
      const auto t0 = Clock::now();
      try {
        switch (st.kind) {
          case StageKind::sender: {
            packet.payload = codec::encode_frame(frame, pair.overt, st.codec_state);
            const std::uint64_t index = st.indexer.next(packet.sequence_number);
            if (masked && i >= boot) {
              mask_in_place(packet.payload, key_of(*config.mask_key), packet.ssrc, index);
            }
            break;
          }
          case StageKind::receiver: {
            Bytes payload = packet.payload;
            const std::uint64_t index = st.indexer.next(packet.sequence_number);
            if (masked && i >= boot) {
              mask_in_place(payload, key_of(*config.mask_key), packet.ssrc, index);
            }
            codec::CodecSpec spec = codec::codec_lookup(packet.payload_type, {});
            if (payload.size() != spec.bytes_per_frame) {
              throw Error(ErrorKind::invariant, "payload length mismatch at receiver");
            }
            received.push_back(codec::decode_payload(payload, spec, st.codec_state));
            break;
          }
          case StageKind::sender_embedder: {
            RoleOutput out = role_step(Role::s1_sender, {header, frame}, *st.state);
            packet = std::move(*out.packet);
            transcodes += out.transcodes;
            break;
          }
          case StageKind::intermediate_embedder:
          case StageKind::intermediate_restorer: {
            const Role role = st.kind == StageKind::intermediate_embedder
                                  ? Role::intermediate_embedder
                                  : Role::intermediate_restorer;
            RoleOutput out = role_step(role, {packet, std::nullopt}, *st.state);
            packet = std::move(*out.packet);
            transcodes += out.transcodes;
            break;
          }
          case StageKind::receiver_extractor: {
            RoleOutput out = role_step(Role::s1_receiver, {packet, std::nullopt}, *st.state);
            received.push_back(*out.voice);
            transcodes += out.transcodes;
            break;
          }
        }
      } catch (const Error& e) {
        throw staged(st, i, e);
      }
      const auto t1 = Clock::now();
      st.times_us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());

      for (auto& [tap, idx] : tap_stage) {
        if (idx != s) continue;
        auto it = report.tap_captures.find(tap);
        if (it == report.tap_captures.end()) continue;
        // Each forwarding node rewrites the datagram, so the checksum is
        // recomputed here.
        it->second.push_back(rtp::make_record(ts_us, config.endpoints, packet));
        report.tap_histograms[tap].add(packet.payload);
      }
    }
    {
      const auto t0 = Clock::now();
      rtp::RtpPacket copy = packet;
      const auto t1 = Clock::now();
      passthrough.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
      (void)copy;
    }
    max_transcodes = std::max(max_transcodes, transcodes);
    min_transcodes = std::min(min_transcodes, transcodes);
  }

  report.packets_sent = packets;
  report.transcode_count = packets == 0 ? expected_transcodes(config.scenario) : max_transcodes;
  if (packets > 0 && min_transcodes != max_transcodes) {
    report.invariant_failures.push_back("transcode count varies across packets");
  }
  if (report.transcode_count != expected_transcodes(config.scenario)) {
    report.invariant_failures.push_back("transcode count " + std::to_string(report.transcode_count) +
                                        " differs from expected " +
                                        std::to_string(expected_transcodes(config.scenario)));
  }

  // Extraction state lives on the restorer (S2, S4) or the receiver (S1, S3).
  const Stage* sr = nullptr;
  for (const auto& st : stages) {
    if (st.kind == StageKind::intermediate_restorer || st.kind == StageKind::receiver_extractor) {
      sr = &st;
    }
  }
  report.stego_bytes_offered = stego.size();
  const StegoChannel& ch = sr->state->stego;
  if (ch.status() == StegoChannel::Status::complete) {
    report.stego_bytes_delivered = ch.header()->length;
    try {
      report.recovered = ch.payload();
      report.extraction_ok = report.recovered == stego;
    } catch (const Error&) {
      report.extraction_ok = false;
    }
  } else {
    report.stego_bytes_delivered =
        ch.cursor() > kChannelHeaderSize ? ch.cursor() - kChannelHeaderSize : 0;
  }
  if (!report.extraction_ok) {
    report.invariant_failures.push_back(
        ch.status() == StegoChannel::Status::pending
            ? "steganogram incomplete: needs more packets than the call carried"
            : "recovered steganogram differs from the input");
  }
  const double seconds = static_cast<double>(packets) / 50.0;
  report.goodput_bit_s =
      seconds > 0.0 ? static_cast<double>(report.stego_bytes_delivered) * 8.0 / seconds : 0.0;
  report.steg_bandwidth_bit_s = steg_bandwidth(pair, 50);

  report.input_samples = input_samples;
  report.receiver_samples = received.size() * audio::kFrameSamples;
  report.voice_continuity_ok =
      report.receiver_samples + audio::kFrameSamples > input_samples &&
      report.receiver_samples < input_samples + audio::kFrameSamples;
  if (!report.voice_continuity_ok) {
    report.invariant_failures.push_back("receiver audio length differs from input");
  }

  report.passthrough_us = summarize(passthrough);
  for (const auto& st : stages) {
    StageTiming t{stage_name(st.kind), is_transteg_stage(st.kind), summarize(st.times_us)};
    if (t.transteg) report.added_us_per_packet += t.stats.mean_us - report.passthrough_us.mean_us;
    report.per_stage_processing_us.push_back(std::move(t));
  }

  if (config.capture_dir) {
    fs::create_directories(*config.capture_dir);
    for (const auto& [tap, records] : report.tap_captures) {
      rtp::write_capture(records, *config.capture_dir / ("tap" + std::to_string(tap) + ".tscap"));
    }
  }
  if (config.receiver_wav) {
    audio::write_wav(audio::unframe(received, std::min(input_samples, report.receiver_samples)),
                     *config.receiver_wav);
  }
  return report;
}

std::vector<CallReport> run_calls(const std::vector<ScenarioConfig>& configs,
                                  unsigned workers) {
  for (const auto& c : configs) validate(c);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));
  std::vector<std::optional<CallReport>> slots(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        try {
          slots[i] = run_call(configs[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  std::vector<CallReport> out;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

AggregateReport aggregate(const std::vector<CallReport>& reports) {
  AggregateReport a;
  for (const auto& r : reports) {
    ++a.calls;
    a.goodput_bit_s += r.goodput_bit_s;
    a.stego_bytes_delivered += r.stego_bytes_delivered;
    a.all_ok = a.all_ok && r.ok();
  }
  return a;
}

namespace {

nlohmann::json timing_json(const TimingStats& t) {
  return {{"count", t.count}, {"total", t.total_us}, {"mean", t.mean_us},
          {"stddev", t.stddev_us}, {"max", t.max_us}};
}

}  // namespace

nlohmann::json report_json(const CallReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["scenario"] = r.scenario;
  j["stages"] = r.stages;
  j["packets_sent"] = r.packets_sent;
  j["stego_bytes_offered"] = r.stego_bytes_offered;
  j["stego_bytes_delivered"] = r.stego_bytes_delivered;
  j["goodput_bit_s"] = r.goodput_bit_s;
  j["steg_bandwidth_bit_s"] = r.steg_bandwidth_bit_s;
  j["transcode_count"] = r.transcode_count;
  j["extraction_ok"] = r.extraction_ok;
  j["voice_continuity_ok"] = r.voice_continuity_ok;
  j["input_samples"] = r.input_samples;
  j["receiver_samples"] = r.receiver_samples;
  j["invariant_failures"] = r.invariant_failures;
  nlohmann::json taps = nlohmann::json::object();
  for (const auto& [tap, h] : r.tap_histograms) {
    taps[std::to_string(tap)] = {{"total", h.total}, {"counts", h.counts}};
  }
  j["tap_histograms"] = taps;
  nlohmann::json proc;
  proc["unit"] = "us";
  for (const auto& s : r.per_stage_processing_us) {
    proc["stages"].push_back({{"stage", s.stage}, {"transteg", s.transteg},
                              {"stats", timing_json(s.stats)}});
  }
  proc["passthrough"] = timing_json(r.passthrough_us);
  proc["added_per_packet"] = r.added_us_per_packet;
  j["processing"] = proc;
  return j;
}

}  // namespace transteg::sim

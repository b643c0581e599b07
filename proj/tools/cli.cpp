#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "transteg/config.hpp"
#include "transteg/error.hpp"
#include "transteg/simulator.hpp"
#include "transteg/transteg.hpp"
#include "transteg/warden.hpp"

#ifndef TRANSTEG_DEFAULT_POLICY
#define TRANSTEG_DEFAULT_POLICY "config/warden_policy.conf"
#endif

namespace transteg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return kUsage;
    case ErrorKind::input:
    case ErrorKind::format: return kInput;
    case ErrorKind::invariant: return kInvariant;
    case ErrorKind::io: return kIo;
  }
  return kInvariant;
}

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot read " + p.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& p, ByteView bytes) {
  std::ofstream o(p, std::ios::binary);
  o.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!o) throw Error(ErrorKind::io, "cannot write " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream o(p);
  o << text;
  if (!o) throw Error(ErrorKind::io, "cannot write " + p.string());
}

// Output parent must exist before any work starts.
void check_output(const fs::path& p) {
  const fs::path parent = fs::absolute(p).parent_path();
  if (!fs::is_directory(parent)) {
    throw Error(ErrorKind::input, "output directory does not exist: " + parent.string());
  }
}

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_text(path, doc.dump(2) + "\n");
  }
}

codec::DynamicPtMap parse_pt_map(const std::vector<std::string>& entries) {
  codec::DynamicPtMap map;
  for (const auto& e : entries) {
    const auto eq = e.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::usage, "--pt-map wants PT=codec, got " + e);
    int pt = 0;
    try {
      pt = std::stoi(e.substr(0, eq));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::usage, "bad PT in " + e);
    }
    if (pt < 96 || pt > 127) throw Error(ErrorKind::usage, "dynamic PTs run 96..127, got " + e);
    codec::CodecSpec spec = codec::require_codec(e.substr(eq + 1));
    spec.payload_type = pt;
    map[pt] = spec;
  }
  return map;
}

Compression parse_compression(const std::string& s) {
  if (s == "none") return Compression::none;
  if (s == "deflate") return Compression::deflate;
  throw Error(ErrorKind::usage, "compression is none or deflate, got " + s);
}

// One RTP stream: a single SSRC between a single pair of endpoints.
void require_single_stream(const std::vector<rtp::PacketRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::input, "capture holds no RTP packets");
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint16_t, std::uint16_t>> streams;
  for (const auto& r : records) {
    streams.insert({r.rtp.ssrc, r.endpoints.src_ip, r.endpoints.dst_ip, r.endpoints.src_port,
                    r.endpoints.dst_port});
  }
  if (streams.size() > 1) {
    throw Error(ErrorKind::input,
                "multi-stream capture rejected: " + std::to_string(streams.size()) + " RTP streams");
  }
}

std::size_t report_checksums(const std::vector<rtp::PacketRecord>& records, std::ostream& err) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!rtp::checksum_valid(records[i])) {
      ++bad;
      err << "packet " << i << " (seq " << records[i].rtp.sequence_number
          << "): UDP checksum mismatch\n";
    }
  }
  return bad;
}

CodecPair stream_pair(const rtp::PacketRecord& first, const codec::DynamicPtMap& pts,
                      const std::string& covert) {
  const codec::CodecSpec overt = codec::codec_lookup(first.rtp.payload_type, pts);
  return covert.empty() ? pair_for(overt) : make_pair(overt, codec::require_codec(covert));
}

// --- subcommands ---------------------------------------------------------

struct BandwidthArgs {
  std::string overt = "g711u";
  std::string covert;
  std::uint32_t pps = 50;
  std::optional<std::uint64_t> duration;
  bool json = false;
};

int cmd_bandwidth(const BandwidthArgs& a, std::ostream& out) {
  const codec::CodecSpec overt = codec::require_codec(a.overt);
  const CodecPair pair =
      a.covert.empty() ? pair_for(overt) : make_pair(overt, codec::require_codec(a.covert));
  const std::uint64_t sb = steg_bandwidth(pair, a.pps);
  if (a.json) {
    json j{{"schema", 1},
           {"overt", codec::codec_name(pair.overt.id)},
           {"covert", codec::codec_name(pair.covert.id)},
           {"pps", a.pps},
           {"steg_bandwidth_bit_s", sb}};
    if (a.duration) {
      j["duration_s"] = *a.duration;
      j["total_bytes"] = steg_total_bytes(sb, *a.duration);
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  out << "steg_bandwidth_bit_s " << sb << "\n";
  if (a.duration) {
    out << "total_bytes " << steg_total_bytes(sb, *a.duration) << " over " << *a.duration << " s\n";
  }
  return kOk;
}

struct SimulateArgs {
  std::string config;
  std::string base_dir;
  std::string report;
  std::map<std::string, std::vector<std::string>> overrides;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  config::KeyValues kv;
  fs::path base = a.base_dir;
  if (!a.config.empty()) {
    kv = config::load_key_values(a.config);
    if (base.empty()) base = fs::path(a.config).parent_path();
  }
  for (const auto& [key, values] : a.overrides) {
    if (values.empty()) continue;
    // A flag for one of the exclusive length keys replaces the other.
    if (key == "packets") kv.values.erase("duration");
    if (key == "duration") kv.values.erase("packets");
    kv.set(key, values);
  }
  const sim::ScenarioConfig cfg = config::scenario_from(kv, base);
  sim::validate(cfg);
  if (!a.report.empty()) check_output(a.report);
  if (cfg.receiver_wav) check_output(*cfg.receiver_wav);

  const sim::CallReport report = sim::run_call(cfg);
  emit(sim::report_json(report), a.report, out);
  for (const auto& f : report.invariant_failures) err << "invariant: " << f << "\n";
  return report.ok() ? kOk : kInvariant;
}

struct EmbedArgs {
  std::string in, out, stego, compression = "none", mask_key, covert;
  std::uint64_t filler_seed = 1;
  std::vector<std::string> pt_map;
};

int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err) {
  const codec::DynamicPtMap pts = parse_pt_map(a.pt_map);
  const Compression compression = parse_compression(a.compression);
  std::optional<Bytes> key;
  if (!a.mask_key.empty()) key = config::parse_hex(a.mask_key);
  check_output(a.out);
  const Bytes stego = read_file(a.stego);
  const rtp::CaptureContents cap = rtp::read_capture(a.in);
  require_single_stream(cap.records);
  const std::size_t bad = report_checksums(cap.records, err);
  if (bad > 0) {
    throw Error(ErrorKind::input, std::to_string(bad) + " packets fail UDP checksum validation");
  }

  const CodecPair pair = stream_pair(cap.records.front(), pts, a.covert);
  const Bytes framed = frame_steganogram(stego, compression);
  StreamState state = StreamState::embedder(pair, framed, a.filler_seed, key);
  state.dynamic_pts = pts;
  const std::size_t boot = state.bootstrap_remaining;
  const std::size_t needed = boot + (framed.size() + pair.capacity_bytes() - 1) / pair.capacity_bytes();
  if (needed > cap.records.size()) {
    throw Error(ErrorKind::invariant, "steganogram needs " + std::to_string(needed) +
                                          " packets, capture has " +
                                          std::to_string(cap.records.size()));
  }

  std::vector<rtp::PacketRecord> result;
  result.reserve(cap.records.size());
  for (std::size_t i = 0; i < cap.records.size(); ++i) {
    const auto& r = cap.records[i];
    try {
      result.push_back(rtp::make_record(r.timestamp_us, r.endpoints, embed(r.rtp, state)));
    } catch (const Error& e) {
      throw Error(e.kind(), "packet " + std::to_string(i) + ": " + e.what());
    }
  }
  rtp::write_capture(result, a.out);
  out << json{{"schema", 1},
              {"packets", result.size()},
              {"capacity_bytes_per_packet", pair.capacity_bytes()},
              {"steganogram_bytes", stego.size()},
              {"framed_bytes", framed.size()},
              {"bootstrap_packets", boot},
              {"packets_used", needed}}
                 .dump(2)
      << "\n";
  return kOk;
}

struct ExtractArgs {
  std::string in, out, covert;
  bool masked = false;
  std::vector<std::string> pt_map;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  const codec::DynamicPtMap pts = parse_pt_map(a.pt_map);
  check_output(a.out);
  const rtp::CaptureContents cap = rtp::read_capture(a.in);
  require_single_stream(cap.records);
  const std::size_t bad = report_checksums(cap.records, err);

  const CodecPair pair = stream_pair(cap.records.front(), pts, a.covert);
  StreamState state = StreamState::extractor(pair, a.masked);
  state.dynamic_pts = pts;
  for (std::size_t i = 0; i < cap.records.size(); ++i) {
    try {
      extract(cap.records[i].rtp, state);
    } catch (const Error& e) {
      throw Error(e.kind(), "packet " + std::to_string(i) + ": " + e.what());
    }
  }
  const auto status = state.stego.status();
  json j{{"schema", 1},
         {"packets", cap.records.size()},
         {"checksum_failures", bad},
         {"status", status == StegoChannel::Status::complete  ? "complete"
                    : status == StegoChannel::Status::pending ? "pending"
                                                              : "invalid"}};
  int rc = kOk;
  if (status == StegoChannel::Status::complete) {
    const Bytes payload = state.stego.payload();
    write_file(a.out, payload);
    j["length"] = state.stego.header()->length;
    j["compression"] = state.stego.header()->compression == Compression::deflate ? "deflate" : "none";
    j["recovered_bytes"] = payload.size();
  } else {
    err << "no complete steganogram in " << a.in << "\n";
    rc = kInvariant;
  }
  out << j.dump(2) << "\n";
  return rc;
}

struct AnalyzeArgs {
  std::vector<std::string> captures;
  std::string policy = TRANSTEG_DEFAULT_POLICY;
  std::string metric;
  std::string csv_dir;
  std::string out;
  std::string stream_id;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  warden::Policy policy = warden::load_policy(a.policy);
  if (!a.metric.empty()) policy.metric = warden::metric_from_name(a.metric);
  if (!a.csv_dir.empty() && !fs::is_directory(a.csv_dir)) {
    throw Error(ErrorKind::input, "CSV directory does not exist: " + a.csv_dir);
  }
  if (!a.out.empty()) check_output(a.out);

  std::vector<warden::TapStream> taps;
  for (std::size_t i = 0; i < a.captures.size(); ++i) {
    std::string path = a.captures[i];
    int position = static_cast<int>(i) + 1;
    if (const auto at = path.rfind('@'); at != std::string::npos) {
      const std::string tap = path.substr(at + 1);
      if (tap != "1" && tap != "2" && tap != "3") {
        throw Error(ErrorKind::usage, "tap position after @ runs 1..3: " + path);
      }
      position = tap[0] - '0';
      path = path.substr(0, at);
    } else if (position > 3) {
      throw Error(ErrorKind::usage, "more than 3 captures: give tap positions as path@N");
    }
    const rtp::CaptureContents cap = rtp::read_capture(path);
    std::string label = "tap" + std::to_string(position) + ":" + fs::path(path).filename().string();
    taps.push_back(warden::tap_stream(position, cap.records, label));
  }
  const warden::DetectionVerdict v = warden::detect(taps, policy, a.stream_id);

  if (!a.csv_dir.empty()) {
    for (std::size_t i = 0; i < taps.size(); ++i) {
      write_text(fs::path(a.csv_dir) / ("tap" + std::to_string(i + 1) + "_histogram.csv"),
                 warden::histogram_csv(taps[i].hist));
    }
  }
  json j{{"schema", 1},
         {"stream_id", v.stream_id},
         {"metric", warden::metric_name(v.metric)},
         {"verdict", v.suspicious ? "suspicious" : "clean"},
         {"rationale", v.rationale},
         {"pairs", json::array()}};
  for (const auto& p : v.pairs) {
    j["pairs"].push_back({{"taps", {p.tap_a, p.tap_b}},
                          {"positions", {p.positions.first, p.positions.second}},
                          {"value", p.value},
                          {"threshold", p.threshold},
                          {"exceeded", p.exceeded}});
  }
  for (const auto& t : taps) {
    j["taps"].push_back({{"label", t.label}, {"position", t.position}, {"packets", t.packet_count},
                         {"payload_bytes", t.hist.total}});
  }
  emit(j, a.out, out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"TranSteg voice steganography lab"};
  app.require_subcommand(1);

  BandwidthArgs bw;
  auto* bandwidth = app.add_subcommand("bandwidth", "steganographic bandwidth of a codec pair");
  bandwidth->add_option("--overt", bw.overt, "overt codec (g711u, g711a)");
  bandwidth->add_option("--covert", bw.covert, "covert codec (default: mapped partner)");
  bandwidth->add_option("--pps", bw.pps, "packets per second")->check(CLI::PositiveNumber);
  bandwidth->add_option("--duration", bw.duration, "call length in seconds");
  bandwidth->add_flag("--json", bw.json, "JSON output");

  SimulateArgs sa;
  std::string s_scenario, s_stego, s_compression, s_key, s_seed, s_packets, s_duration, s_capture,
      s_wav_out;
  std::vector<std::string> s_wavs, s_taps;
  auto* simulate = app.add_subcommand(
      "simulate",
      "run a call through the scenario pipeline; JSON report keys: schema, scenario, stages, "
      "packets_sent, stego_bytes_offered, stego_bytes_delivered, goodput_bit_s, "
      "steg_bandwidth_bit_s, transcode_count, extraction_ok, voice_continuity_ok, "
      "tap_histograms, processing, invariant_failures");
  simulate->add_option("--config", sa.config, "key = value scenario file");
  simulate->add_option("--base-dir", sa.base_dir, "resolve relative paths here");
  simulate->add_option("--report", sa.report, "report path (default stdout)");
  simulate->add_option("--scenario", s_scenario, "S1..S4");
  simulate->add_option("--wav", s_wavs, "voice input(s)");
  simulate->add_option("--stego", s_stego, "steganogram file");
  simulate->add_option("--compression", s_compression, "none | deflate");
  simulate->add_option("--mask-key", s_key, "SRTP-style session key, hex");
  simulate->add_option("--filler-seed", s_seed);
  auto* packets_opt = simulate->add_option("--packets", s_packets, "packet count");
  auto* duration_opt = simulate->add_option("--duration", s_duration, "call length, seconds");
  packets_opt->excludes(duration_opt);
  simulate->add_option("--taps", s_taps, "tap positions 1..3")->delimiter(',');
  simulate->add_option("--capture-dir", s_capture, "write tapN.tscap captures here");
  simulate->add_option("--receiver-wav", s_wav_out, "receiver-side audio");

  EmbedArgs ea;
  auto* embedc = app.add_subcommand("embed", "embed a steganogram into a G.711 capture");
  embedc->add_option("--in", ea.in)->required();
  embedc->add_option("--out", ea.out)->required();
  embedc->add_option("--stego", ea.stego)->required();
  embedc->add_option("--compression", ea.compression);
  embedc->add_option("--mask-key", ea.mask_key, "session key, hex; enables masking");
  embedc->add_option("--covert", ea.covert);
  embedc->add_option("--filler-seed", ea.filler_seed);
  embedc->add_option("--pt-map", ea.pt_map, "PT=codec for dynamic payload types");

  ExtractArgs xa;
  auto* extractc = app.add_subcommand("extract", "recover a steganogram from a capture");
  extractc->add_option("--in", xa.in)->required();
  extractc->add_option("--out", xa.out)->required();
  extractc->add_flag("--masked", xa.masked, "session masked after a key bootstrap");
  extractc->add_option("--covert", xa.covert);
  extractc->add_option("--pt-map", xa.pt_map);

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "warden byte-histogram analysis of tap captures");
  analyze->add_option("captures", aa.captures, "capture[@tap] ...")->required();
  analyze->add_option("--policy", aa.policy, "threshold policy file");
  analyze->add_option("--metric", aa.metric, "total-variation | chi-square | kl-smoothed");
  analyze->add_option("--csv-dir", aa.csv_dir, "write per-tap histogram CSVs here");
  analyze->add_option("--out", aa.out, "verdict path (default stdout)");
  analyze->add_option("--stream-id", aa.stream_id);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*bandwidth) return cmd_bandwidth(bw, out);
    if (*simulate) {
      auto put = [&](const char* key, const std::string& v) {
        if (!v.empty()) sa.overrides[key] = {v};
      };
      put("scenario", s_scenario);
      put("stego", s_stego);
      put("compression", s_compression);
      put("mask_key", s_key);
      put("filler_seed", s_seed);
      put("packets", s_packets);
      put("duration", s_duration);
      put("capture_dir", s_capture);
      put("receiver_wav", s_wav_out);
      if (!s_wavs.empty()) sa.overrides["wav"] = s_wavs;
      if (!s_taps.empty()) sa.overrides["taps"] = s_taps;
      return cmd_simulate(sa, out, err);
    }
    if (*embedc) return cmd_embed(ea, out, err);
    if (*extractc) return cmd_extract(xa, out, err);
    if (*analyze) return cmd_analyze(aa, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  }
  return kUsage;
}

}  // namespace transteg::cli

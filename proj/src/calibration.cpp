#include "transteg/calibration.hpp"

#include <algorithm>
#include <limits>

#include "transteg/error.hpp"

namespace transteg::calib {

Bytes deflate_fit(ByteView text, std::size_t budget) {
  std::size_t lo = 0;
  std::size_t hi = text.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (deflate_bytes(text.first(mid)).size() <= budget) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return Bytes(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(lo));
}

std::size_t body_budget(const CodecPair& pair, std::size_t packets) {
  const std::size_t total = pair.capacity_bytes() * packets;
  return total > kChannelHeaderSize ? total - kChannelHeaderSize : 0;
}

namespace {

std::map<int, std::vector<rtp::PacketRecord>> s4_taps(const audio::PcmStream& voice,
                                                      Bytes stego, Compression c,
                                                      std::uint64_t seed,
                                                      std::size_t packets) {
  sim::ScenarioConfig cfg;
  cfg.scenario = sim::Scenario::s4;
  cfg.pcm = voice;
  cfg.stego_data = std::move(stego);
  cfg.compression = c;
  cfg.filler_seed = seed;
  cfg.packet_count = packets;
  cfg.taps = {1, 2, 3};
  sim::CallReport r = sim::run_call(cfg);
  if (!r.extraction_ok) throw Error(ErrorKind::invariant, "calibration run lost its steganogram");
  return std::move(r.tap_captures);
}

}  // namespace

FixtureRuns run_fixture(const audio::PcmStream& voice, ByteView text, std::uint64_t seed_base,
                        std::size_t packets) {
  const CodecPair pair = pair_for(codec::g711_mu());
  const std::size_t budget = body_budget(pair, packets);
  FixtureRuns runs;
  runs.clean = s4_taps(voice, {}, Compression::none, seed_base + 1, packets);
  runs.clean_alt = s4_taps(voice, {}, Compression::none, seed_base + 2, packets);
  const std::size_t raw_len = std::min(budget, text.size());
  runs.raw = s4_taps(voice, Bytes(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(raw_len)),
                     Compression::none, seed_base + 3, packets);
  runs.deflate = s4_taps(voice, deflate_fit(text, budget), Compression::deflate, seed_base + 4, packets);
  return runs;
}

FixtureMetrics measure(const FixtureRuns& runs, warden::Metric metric) {
  using warden::histogram;
  auto d = [&](const std::vector<rtp::PacketRecord>& a, const std::vector<rtp::PacketRecord>& b) {
    return warden::divergence(histogram(a), histogram(b), metric);
  };
  FixtureMetrics m;
  m.clean_vs_clean = d(runs.clean.at(2), runs.clean_alt.at(2));
  m.clean_vs_raw = d(runs.clean.at(2), runs.raw.at(2));
  m.clean_vs_deflate = d(runs.clean.at(2), runs.deflate.at(2));
  m.min_format_12 = std::numeric_limits<double>::max();
  m.min_format_23 = std::numeric_limits<double>::max();
  for (const auto* taps : {&runs.clean, &runs.clean_alt, &runs.raw, &runs.deflate}) {
    m.min_format_12 = std::min(m.min_format_12, d(taps->at(1), taps->at(2)));
    m.min_format_23 = std::min(m.min_format_23, d(taps->at(2), taps->at(3)));
    m.max_artifact_13 = std::max(m.max_artifact_13, d(taps->at(1), taps->at(3)));
  }
  return m;
}

Calibration calibrate(const std::vector<audio::PcmStream>& voices,
                      const std::vector<std::string>& names, ByteView text,
                      warden::Metric metric) {
  if (voices.empty()) throw Error(ErrorKind::usage, "calibration needs fixtures");
  Calibration cal;
  double max_cc = 0, min_raw = std::numeric_limits<double>::max();
  double min_12 = std::numeric_limits<double>::max(), min_23 = min_12;
  double max_13 = 0;
  cal.min_raw_deflate_ratio = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < voices.size(); ++i) {
    FixtureMetrics m = measure(run_fixture(voices[i], text, 100 * (i + 1)), metric);
    m.fixture = i < names.size() ? names[i] : std::to_string(i + 1);
    max_cc = std::max(max_cc, m.clean_vs_clean);
    min_raw = std::min(min_raw, m.clean_vs_raw);
    min_12 = std::min(min_12, m.min_format_12);
    min_23 = std::min(min_23, m.min_format_23);
    max_13 = std::max(max_13, m.max_artifact_13);
    cal.min_raw_deflate_ratio =
        std::min(cal.min_raw_deflate_ratio, m.clean_vs_raw / std::max(m.clean_vs_deflate, 1e-12));
    cal.fixtures.push_back(m);
  }
  cal.policy.metric = metric;
  // Without TranSteg on the path taps 1..3 see the same bytes, so the
  // clean population of the format-change pairs sits at 0.
  cal.policy.thresholds[{1, 2}] = min_12 / 2.0;
  cal.policy.thresholds[{2, 3}] = min_23 / 2.0;
  cal.policy.thresholds[{1, 3}] = kArtifactBandFactor * max_13;
  cal.policy.thresholds[{2, 2}] = (max_cc + min_raw) / 2.0;
  return cal;
}

}  // namespace transteg::calib

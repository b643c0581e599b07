#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "transteg/bytes.hpp"
#include "transteg/capture.hpp"

namespace transteg::warden {

struct ByteHistogram {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;
  std::string tap_id;

  void add(ByteView bytes);
  void add(const rtp::PacketRecord& record) { add(record.rtp.payload); }

  /// Counts only; the label is not part of the distribution.
  bool same_counts(const ByteHistogram& other) const {
    return counts == other.counts && total == other.total;
  }
};

ByteHistogram histogram(ByteView bytes, std::string tap_id = {});
/// Payload bytes of every packet in the stream.
ByteHistogram histogram(const std::vector<rtp::PacketRecord>& stream,
                        std::string tap_id = {});
/// Element-wise sum. Keeps the label of `a`.
ByteHistogram merge(const ByteHistogram& a, const ByteHistogram& b);

enum class Metric { total_variation, chi_square, kl_smoothed };

std::string metric_name(Metric metric);
Metric metric_from_name(const std::string& name);

/// Distribution distance between two histograms. Chi-square is the
/// symmetric form sum (p-q)^2/(p+q) over normalized counts; KL uses
/// add-one smoothing in both directions and reports the larger.
double divergence(const ByteHistogram& a, const ByteHistogram& b, Metric metric);

/// Tap pair key, smaller position first.
using TapPair = std::pair<int, int>;

struct Policy {
  Metric metric = Metric::total_variation;
  std::map<TapPair, double> thresholds;
  /// Relative packet count difference allowed between compared taps.
  double packet_count_tolerance = 0.05;

  /// Threshold for a pair; same-position comparisons share the 2-2 entry.
  double threshold(int tap_a, int tap_b) const;
};

Policy parse_policy(const std::string& text);
std::string format_policy(const Policy& policy);
Policy load_policy(const std::filesystem::path& path);
void save_policy(const Policy& policy, const std::filesystem::path& path);

/// One observed stream: tap position 1..3 plus a display label.
struct TapStream {
  int position = 0;
  std::string label;
  ByteHistogram hist;
  std::size_t packet_count = 0;
};

TapStream tap_stream(int position, const std::vector<rtp::PacketRecord>& stream,
                     std::string label = {});

struct PairMetric {
  std::string tap_a;
  std::string tap_b;
  TapPair positions;
  double value = 0.0;
  double threshold = 0.0;
  bool exceeded = false;
};

struct DetectionVerdict {
  std::string stream_id;
  Metric metric = Metric::total_variation;
  std::vector<PairMetric> pairs;
  bool suspicious = false;
  std::string rationale;
};

/// Pairwise comparison of every tap against every other. Throws when the
/// packet counts of a pair differ beyond the policy tolerance.
DetectionVerdict detect(const std::vector<TapStream>& taps, const Policy& policy,
                        std::string stream_id = {});

/// 256 rows of "byte,count" after a header line.
std::string histogram_csv(const ByteHistogram& hist);

}  // namespace transteg::warden

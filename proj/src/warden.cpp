#include "transteg/warden.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "transteg/error.hpp"

namespace transteg::warden {

void ByteHistogram::add(ByteView bytes) {
  for (std::uint8_t b : bytes) ++counts[b];
  total += bytes.size();
}

ByteHistogram histogram(ByteView bytes, std::string tap_id) {
  ByteHistogram h;
  h.tap_id = std::move(tap_id);
  h.add(bytes);
  return h;
}

ByteHistogram histogram(const std::vector<rtp::PacketRecord>& stream,
                        std::string tap_id) {
  ByteHistogram h;
  h.tap_id = std::move(tap_id);
  for (const auto& r : stream) h.add(r);
  return h;
}

ByteHistogram merge(const ByteHistogram& a, const ByteHistogram& b) {
  ByteHistogram out = a;
  for (std::size_t i = 0; i < 256; ++i) out.counts[i] += b.counts[i];
  out.total += b.total;
  return out;
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::total_variation: return "total-variation";
    case Metric::chi_square: return "chi-square";
    case Metric::kl_smoothed: return "kl-smoothed";
  }
  return "?";
}

Metric metric_from_name(const std::string& name) {
  if (name == "total-variation" || name == "tv") return Metric::total_variation;
  if (name == "chi-square" || name == "chi2") return Metric::chi_square;
  if (name == "kl-smoothed" || name == "kl") return Metric::kl_smoothed;
  throw Error(ErrorKind::usage, "unknown metric " + name);
}

namespace {

double kl(const ByteHistogram& p, const ByteHistogram& q) {
  const double pn = static_cast<double>(p.total) + 256.0;
  const double qn = static_cast<double>(q.total) + 256.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < 256; ++i) {
    const double pi = (static_cast<double>(p.counts[i]) + 1.0) / pn;
    const double qi = (static_cast<double>(q.counts[i]) + 1.0) / qn;
    sum += pi * std::log(pi / qi);
  }
  return sum;
}

}  // namespace

double divergence(const ByteHistogram& a, const ByteHistogram& b, Metric metric) {
  if (a.total == 0 || b.total == 0) {
    throw Error(ErrorKind::input, "empty histogram");
  }
  const double an = static_cast<double>(a.total);
  const double bn = static_cast<double>(b.total);
  switch (metric) {
    case Metric::total_variation: {
      double sum = 0.0;
      for (std::size_t i = 0; i < 256; ++i) {
        sum += std::abs(static_cast<double>(a.counts[i]) / an -
                        static_cast<double>(b.counts[i]) / bn);
      }
      return std::min(1.0, 0.5 * sum);
    }
    case Metric::chi_square: {
      double sum = 0.0;
      for (std::size_t i = 0; i < 256; ++i) {
        const double p = static_cast<double>(a.counts[i]) / an;
        const double q = static_cast<double>(b.counts[i]) / bn;
        if (p + q > 0.0) sum += (p - q) * (p - q) / (p + q);
      }
      return sum;
    }
    case Metric::kl_smoothed:
      return std::max(kl(a, b), kl(b, a));
  }
  return 0.0;
}

double Policy::threshold(int tap_a, int tap_b) const {
  TapPair key{std::min(tap_a, tap_b), std::max(tap_a, tap_b)};
  if (key.first == key.second) key = {2, 2};
  const auto it = thresholds.find(key);
  if (it == thresholds.end()) {
    throw Error(ErrorKind::input, "policy has no threshold for taps " +
                                      std::to_string(key.first) + "-" +
                                      std::to_string(key.second));
  }
  return it->second;
}

Policy parse_policy(const std::string& text) {
  Policy p;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool schema_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) {
      throw Error(ErrorKind::input, "policy line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "schema") {
        if (value != "1") throw Error(ErrorKind::input, "unsupported policy schema " + value);
        schema_seen = true;
      } else if (key == "metric") {
        p.metric = metric_from_name(value);
      } else if (key == "packet_count_tolerance") {
        p.packet_count_tolerance = std::stod(value);
      } else if (key.rfind("threshold.", 0) == 0) {
        const std::string pair = key.substr(10);
        const auto dash = pair.find('-');
        if (dash == std::string::npos) throw Error(ErrorKind::input, "bad tap pair " + pair);
        const int a = std::stoi(pair.substr(0, dash));
        const int b = std::stoi(pair.substr(dash + 1));
        if (a < 1 || a > 3 || b < 1 || b > 3) {
          throw Error(ErrorKind::input, "tap positions run 1..3: " + pair);
        }
        p.thresholds[{std::min(a, b), std::max(a, b)}] = std::stod(value);
      } else {
        throw Error(ErrorKind::input, "unknown policy key " + key);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::input, "policy line " + std::to_string(line_no) + ": bad number " + value);
    }
  }
  if (!schema_seen) throw Error(ErrorKind::input, "policy lacks schema=1");
  return p;
}

std::string format_policy(const Policy& policy) {
  std::ostringstream out;
  out << "schema=1\n";
  out << "metric=" << metric_name(policy.metric) << "\n";
  out << std::setprecision(9);
  for (const auto& [pair, value] : policy.thresholds) {
    out << "threshold." << pair.first << "-" << pair.second << "=" << value << "\n";
  }
  out << "packet_count_tolerance=" << policy.packet_count_tolerance << "\n";
  return out.str();
}

Policy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot read policy " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_policy(text.str());
}

void save_policy(const Policy& policy, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::io, "cannot write policy " + path.string());
  out << format_policy(policy);
}

TapStream tap_stream(int position, const std::vector<rtp::PacketRecord>& stream,
                     std::string label) {
  if (label.empty()) label = "tap" + std::to_string(position);
  TapStream t{position, label, histogram(stream, label), stream.size()};
  return t;
}

DetectionVerdict detect(const std::vector<TapStream>& taps, const Policy& policy,
                        std::string stream_id) {
  if (taps.empty()) throw Error(ErrorKind::usage, "detect needs at least one tap");
  DetectionVerdict v;
  v.stream_id = std::move(stream_id);
  v.metric = policy.metric;
  if (taps.size() == 1) {
    v.rationale = "single localization";
    return v;
  }
  for (std::size_t i = 0; i < taps.size(); ++i) {
    for (std::size_t j = i + 1; j < taps.size(); ++j) {
      const auto& a = taps[i];
      const auto& b = taps[j];
      const double na = static_cast<double>(a.packet_count);
      const double nb = static_cast<double>(b.packet_count);
      if (std::abs(na - nb) > policy.packet_count_tolerance * std::max(na, nb)) {
        throw Error(ErrorKind::input, "packet counts differ beyond tolerance: " +
                                          a.label + " has " + std::to_string(a.packet_count) +
                                          ", " + b.label + " has " +
                                          std::to_string(b.packet_count));
      }
      PairMetric m;
      m.tap_a = a.label;
      m.tap_b = b.label;
      m.positions = {std::min(a.position, b.position), std::max(a.position, b.position)};
      m.value = divergence(a.hist, b.hist, policy.metric);
      m.threshold = policy.threshold(a.position, b.position);
      m.exceeded = m.value > m.threshold;
      if (m.exceeded && !v.suspicious) {
        v.suspicious = true;
        v.rationale = m.tap_a + " vs " + m.tap_b + " exceeds threshold";
      }
      v.pairs.push_back(std::move(m));
    }
  }
  if (!v.suspicious) v.rationale = "all tap pairs within thresholds";
  return v;
}

std::string histogram_csv(const ByteHistogram& hist) {
  std::ostringstream out;
  out << "byte,count\n";
  for (std::size_t i = 0; i < 256; ++i) out << i << "," << hist.counts[i] << "\n";
  return out.str();
}

}  // namespace transteg::warden

#include "transteg/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "transteg/error.hpp"

namespace transteg::config {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used, 0);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return n;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::usage, key + ": not a non-negative integer: " + v);
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::usage, key + ": not a number: " + v);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::vector<std::string> KeyValues::list(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = values.find(key);
  if (it == values.end()) return out;
  for (const auto& v : it->second) {
    for (auto& item : split_list(v)) out.push_back(std::move(item));
  }
  return out;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::input, "config line " + std::to_string(n) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorKind::input, "config line " + std::to_string(n) + ": empty key");
    kv.values[key].push_back(trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues load_key_values(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot read config " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return parse_key_values(s.str());
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Bytes parse_hex(const std::string& hex) {
  std::string h;
  for (char c : hex) {
    if (c != ':' && c != ' ') h += c;
  }
  if (h.size() % 2 != 0) throw Error(ErrorKind::usage, "hex string has odd length");
  Bytes out;
  for (std::size_t i = 0; i < h.size(); i += 2) {
    auto nib = [&](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      throw Error(ErrorKind::usage, std::string("not a hex digit: ") + c);
    };
    out.push_back(static_cast<std::uint8_t>(nib(h[i]) << 4 | nib(h[i + 1])));
  }
  return out;
}

sim::ScenarioConfig scenario_from(const KeyValues& kv, const fs::path& base_dir) {
  static const std::set<std::string> known{
      "scenario", "wav",      "stego", "compression", "mask_key",    "filler_seed", "packets",
      "duration", "taps",     "overt", "covert",      "capture_dir", "receiver_wav"};
  for (const auto& [key, _] : kv.values) {
    if (!known.count(key)) throw Error(ErrorKind::usage, "unknown config key " + key);
  }
  sim::ScenarioConfig c;
  if (auto v = kv.get("scenario")) c.scenario = sim::scenario_from_name(*v);
  for (const auto& w : kv.list("wav")) c.wav_inputs.push_back(resolve(base_dir, w));
  if (auto v = kv.get("stego"); v && !v->empty()) c.stego_input = resolve(base_dir, *v);
  if (auto v = kv.get("compression")) {
    if (*v == "none") {
      c.compression = Compression::none;
    } else if (*v == "deflate") {
      c.compression = Compression::deflate;
    } else {
      throw Error(ErrorKind::usage, "compression is none or deflate, got " + *v);
    }
  }
  if (auto v = kv.get("mask_key"); v && !v->empty()) c.mask_key = parse_hex(*v);
  if (auto v = kv.get("filler_seed")) c.filler_seed = to_u64("filler_seed", *v);
  if (kv.has("packets") && kv.has("duration")) {
    throw Error(ErrorKind::usage, "packets and duration are mutually exclusive");
  }
  if (auto v = kv.get("packets")) c.packet_count = to_u64("packets", *v);
  if (auto v = kv.get("duration")) c.duration_s = to_double("duration", *v);
  for (const auto& t : kv.list("taps")) {
    const auto n = to_u64("taps", t);
    if (n < 1 || n > 3) throw Error(ErrorKind::usage, "tap positions run 1..3, got " + t);
    c.taps.push_back(static_cast<int>(n));
  }
  const codec::CodecSpec overt =
      kv.get("overt") ? codec::require_codec(*kv.get("overt")) : codec::g711_mu();
  c.codec_pair = kv.get("covert") ? make_pair(overt, codec::require_codec(*kv.get("covert")))
                                  : pair_for(overt);
  if (auto v = kv.get("capture_dir"); v && !v->empty()) c.capture_dir = resolve(base_dir, *v);
  if (auto v = kv.get("receiver_wav"); v && !v->empty()) c.receiver_wav = resolve(base_dir, *v);
  return c;
}

}  // namespace transteg::config

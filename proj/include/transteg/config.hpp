#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "transteg/bytes.hpp"
#include "transteg/simulator.hpp"

namespace transteg::config {

/// key = value lines; '#' starts a comment. Keys may repeat.
struct KeyValues {
  std::map<std::string, std::vector<std::string>> values;

  std::optional<std::string> get(const std::string& key) const;
  /// Every value of `key`, comma lists flattened.
  std::vector<std::string> list(const std::string& key) const;
  void set(const std::string& key, std::string value) { values[key] = {std::move(value)}; }
  void set(const std::string& key, std::vector<std::string> v) { values[key] = std::move(v); }
  bool has(const std::string& key) const { return values.count(key) != 0; }
};

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::filesystem::path& path);

std::vector<std::string> split_list(const std::string& text);
Bytes parse_hex(const std::string& hex);

/// Keys: scenario, wav, stego, compression, mask_key, filler_seed,
/// packets, duration, taps, overt, covert, capture_dir, receiver_wav.
/// Relative paths resolve against `base_dir`.
sim::ScenarioConfig scenario_from(const KeyValues& kv, const std::filesystem::path& base_dir);

}  // namespace transteg::config

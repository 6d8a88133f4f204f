#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace maglat {

// Flat "key = value" config format: one pair per line, '#' comments, blank
// lines ignored, keys may be dotted (line.D1.frequency_hz).  Duplicate keys
// are an error; layout order never matters.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text,
                                     const std::string& origin);

  bool has(const std::string& key) const;
  // Throw ConfigError naming the key (and file) if absent or malformed.
  const std::string& get_string(const std::string& key) const;
  double get_number(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  double get_number_or(const std::string& key, double fallback) const;

  // Keys sharing a dotted prefix, e.g. prefix "line" -> {"D1", "D2"}.
  std::vector<std::string> group_names(const std::string& prefix) const;

  // Strictness: loaders call these so a typo'd key is an error, not silence.
  void mark_consumed(const std::string& key) const;
  std::vector<std::string> unconsumed() const;
  const std::string& origin() const { return origin_; }

 private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> consumed_;
  std::string origin_;
};

}  // namespace maglat

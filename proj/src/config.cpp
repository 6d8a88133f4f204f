#include "maglat/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "maglat/errors.hpp"

namespace maglat {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": empty key or value");
    if (!cfg.values_.emplace(key, value).second)
      throw ConfigError(origin + ": duplicate key '" + key + "'");
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

const std::string& KeyValueConfig::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError(origin_ + ": missing key '" + key + "'");
  consumed_.insert(key);
  return it->second;
}

double KeyValueConfig::get_number(const std::string& key) const {
  const std::string& raw = get_string(key);
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key '" + key + "' is not a number: " + raw);
  }
  if (pos != raw.size())
    throw ConfigError(origin_ + ": key '" + key + "' has trailing junk: " + raw);
  return v;
}

double KeyValueConfig::get_number_or(const std::string& key,
                                     double fallback) const {
  return has(key) ? get_number(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string& raw = get_string(key);
  if (raw == "true" || raw == "1") return true;
  if (raw == "false" || raw == "0") return false;
  throw ConfigError(origin_ + ": key '" + key + "' is not a bool: " + raw);
}

std::vector<std::string> KeyValueConfig::group_names(
    const std::string& prefix) const {
  std::vector<std::string> names;
  const std::string p = prefix + ".";
  for (const auto& [key, _] : values_) {
    if (key.rfind(p, 0) != 0) continue;
    const size_t dot = key.find('.', p.size());
    const std::string name =
        key.substr(p.size(), dot == std::string::npos ? std::string::npos
                                                      : dot - p.size());
    if (names.empty() || names.back() != name) names.push_back(name);
  }
  return names;
}

void KeyValueConfig::mark_consumed(const std::string& key) const {
  consumed_.insert(key);
}

std::vector<std::string> KeyValueConfig::unconsumed() const {
  std::vector<std::string> out;
  for (const auto& [key, _] : values_)
    if (!consumed_.count(key)) out.push_back(key);
  return out;
}

}  // namespace maglat

#include "ecggan/config.hpp"

#include <algorithm>
#include <charconv>

#include "ecggan/error.hpp"
#include "ecggan/io.hpp"

namespace ecggan {

ConfigMap ConfigMap::parse(std::string_view text) {
  ConfigMap m;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": empty key");
    m.entries_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return m;
}

ConfigMap ConfigMap::load(const std::filesystem::path& path) { return parse(read_file(path)); }

bool ConfigMap::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

void ConfigMap::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }

void ConfigMap::merge(const ConfigMap& other) {
  for (const auto& [k, v] : other.entries_) entries_[k] = v;
}

std::string ConfigMap::get_string(std::string_view key, std::string_view fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? std::string(fallback) : it->second;
}

double ConfigMap::get_double(std::string_view key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    return parse_double(it->second);
  } catch (const Error&) {
    throw Error(ErrorCode::Config, std::string(key) + ": not a number: " + it->second);
  }
}

long long ConfigMap::get_int(std::string_view key, long long fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  long long v = 0;
  const std::string& s = it->second;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorCode::Config, std::string(key) + ": not an integer: " + s);
  return v;
}

bool ConfigMap::get_bool(std::string_view key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw Error(ErrorCode::Config, std::string(key) + ": expected true or false: " + it->second);
}

std::string ConfigMap::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void ConfigMap::require_known(const std::vector<std::string_view>& known) const {
  std::string unknown;
  for (const auto& [k, v] : entries_) {
    if (std::find(known.begin(), known.end(), k) == known.end()) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) throw Error(ErrorCode::Config, "unknown keys: " + unknown);
}

}  // namespace ecggan

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ecggan {

/// Flat `key = value` settings. Lines starting with '#' and blank lines are
/// ignored; later assignments override earlier ones.
class ConfigMap {
 public:
  ConfigMap() = default;

  static ConfigMap parse(std::string_view text);
  static ConfigMap load(const std::filesystem::path& path);

  bool has(std::string_view key) const;
  void set(std::string key, std::string value);
  /// Overlays every entry of `other` onto this map.
  void merge(const ConfigMap& other);

  std::string get_string(std::string_view key, std::string_view fallback) const;
  double get_double(std::string_view key, double fallback) const;
  long long get_int(std::string_view key, long long fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

  /// Sorted `key = value` lines; parse(to_text()) reproduces the map.
  std::string to_text() const;

  /// Throws Config naming every key not in `known`.
  void require_known(const std::vector<std::string_view>& known) const;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

}  // namespace ecggan

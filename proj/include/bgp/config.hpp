#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bgp {

/// Flat key=value configuration with '#' comments. Dotted keys express
/// nested options (e.g. bsp.P=10).
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  /// "key=value" override, as passed on the command line.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                const std::vector<int>& fallback) const;
  std::vector<std::string> get_string_list(
      const std::string& key, const std::vector<std::string>& fallback) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

  /// Round-trippable text form (sorted key=value lines).
  std::string serialize() const;

 private:
  std::map<std::string, std::string> entries_;
};

/// Parses "inf" / "infinity" as the non-informative sigma2_x sentinel.
double parse_sigma2_x(const std::string& text);

}  // namespace bgp

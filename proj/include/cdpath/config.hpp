#pragma once

// Flat INI-style experiment configuration: [section] blocks of key = value
// lines, '#' or ';' comments. Parse errors and missing keys are reported with
// line-level diagnostics.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cdpath {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& name);

  bool has(const std::string& key) const;  // key = "section.name"
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key,
                                  const std::vector<double>& fallback) const;
  std::vector<int> get_ints(const std::string& key) const;
  std::vector<int> get_ints(const std::string& key,
                            const std::vector<int>& fallback) const;

  // Stable serialization (sorted keys) used for the run id hash and the
  // manifest echo.
  std::string canonical() const;
  const std::map<std::string, std::string>& entries() const { return values_; }

  void set(const std::string& key, const std::string& value);

 private:
  [[noreturn]] void missing(const std::string& key) const;
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
  std::string name_ = "<config>";
};

// FNV-1a hash of the canonical config text; stable across runs and platforms.
std::string config_hash(const Config& cfg, const std::string& salt);

}  // namespace cdpath

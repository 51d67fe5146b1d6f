#include "cdpath/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace cdpath {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": key '" + key + "' outside any [section]");
    const std::string full = section + "." + key;
    if (cfg.values_.count(full))
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + full + "'");
    cfg.values_[full] = value;
    cfg.lines_[full] = lineno;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

void Config::missing(const std::string& key) const {
  const auto dot = key.find('.');
  throw ConfigError(name_ + ": missing required key '" + key +
                    "' (add it under [" + key.substr(0, dot) + "])");
}

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) missing(key);
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(name_ + ":" + std::to_string(lines_.at(key)) + ": key '" +
                      key + "' is not a number: '" + s + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(name_ + ":" + std::to_string(lines_.at(key)) + ": key '" +
                      key + "' is not an integer");
  return i;
}

int Config::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(name_ + ":" + std::to_string(lines_.at(key)) + ": key '" +
                    key + "' is not a boolean: '" + s + "'");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const std::string s = get_string(key);
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(name_ + ":" + std::to_string(lines_.at(key)) + ": key '" +
                        key + "' has a non-numeric entry '" + tok + "'");
    }
  }
  if (out.empty()) missing(key);
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key,
                                        const std::vector<double>& fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

std::vector<int> Config::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const double v : get_doubles(key)) {
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ConfigError(name_ + ":" + std::to_string(lines_.at(key)) + ": key '" +
                        key + "' has a non-integer entry");
    out.push_back(i);
  }
  return out;
}

std::vector<int> Config::get_ints(const std::string& key,
                                  const std::vector<int>& fallback) const {
  return has(key) ? get_ints(key) : fallback;
}

std::string Config::canonical() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) out << key << " = " << value << "\n";
  return out.str();
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_[key] = 0;
}

std::string config_hash(const Config& cfg, const std::string& salt) {
  const std::string text = salt + "\n" + cfg.canonical();
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cdpath

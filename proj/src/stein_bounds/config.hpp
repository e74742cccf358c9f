#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace stein_bounds {

// Parse or lookup failure; the message carries <origin>:<line> where known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key-value experiment configuration in a TOML-compatible subset: [section]
// headers, key = value lines, # comments, quoted strings, numbers, booleans
// and one-line numeric arrays. Keys are addressed as (section, key); keys
// before any header live in the "" section.
class Config {
 public:
  using Value = std::variant<std::string, double, bool, std::vector<double>>;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& section, const std::string& key) const;

  // typed getters: throw ConfigError naming section.key when absent or mistyped
  std::string get_string(const std::string& section, const std::string& key) const;
  double get_number(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key) const;
  std::vector<double> get_array(const std::string& section, const std::string& key) const;
  std::vector<long> get_int_array(const std::string& section, const std::string& key) const;

  // defaulted variants
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_number(const std::string& section, const std::string& key, double fallback) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  const std::map<std::string, Value>& entries() const { return entries_; }

 private:
  const Value* find(const std::string& section, const std::string& key) const;
  std::map<std::string, Value> entries_;  // "section.key" -> value
  std::string origin_;
};

}  // namespace stein_bounds

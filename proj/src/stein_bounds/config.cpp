#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace stein_bounds {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// removes a trailing # comment, respecting double quotes
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& s, const std::string& origin, int line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(origin, line, "malformed number '" + s + "'");
  return v;
}

Config::Value parse_value(const std::string& raw, const std::string& origin, int line) {
  if (raw.empty()) fail(origin, line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      fail(origin, line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\' && i + 2 < raw.size()) {
        ++i;
        switch (raw[i]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: out += raw[i];
        }
      } else {
        out += raw[i];
      }
    }
    return out;
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '[') {
    if (raw.back() != ']') fail(origin, line, "unterminated array");
    std::vector<double> items;
    std::string body = raw.substr(1, raw.size() - 2);
    std::istringstream ss(body);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      piece = trim(piece);
      if (piece.empty()) {
        if (ss.peek() == EOF && !items.empty()) break;  // trailing comma
        fail(origin, line, "empty array element");
      }
      items.push_back(parse_number(piece, origin, line));
    }
    return items;
  }
  return parse_number(raw, origin, line);
}

const char* kind_name(const Config::Value& v) {
  switch (v.index()) {
    case 0: return "string";
    case 1: return "number";
    case 2: return "boolean";
    default: return "array";
  }
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    std::string full = section.empty() ? key : section + "." + key;
    if (cfg.entries_.count(full)) fail(origin, lineno, "duplicate key '" + full + "'");
    cfg.entries_.emplace(std::move(full), parse_value(value, origin, lineno));
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const Config::Value* Config::find(const std::string& section, const std::string& key) const {
  auto it = entries_.find(section.empty() ? key : section + "." + key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) throw ConfigError(origin_ + ": missing key '" + section + "." + key + "'");
  if (v->index() != 0)
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is a " + kind_name(*v) +
                      ", expected string");
  return std::get<std::string>(*v);
}

double Config::get_number(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) throw ConfigError(origin_ + ": missing key '" + section + "." + key + "'");
  if (v->index() != 1)
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is a " + kind_name(*v) +
                      ", expected number");
  return std::get<double>(*v);
}

long Config::get_int(const std::string& section, const std::string& key) const {
  double v = get_number(section, key);
  if (v != std::floor(v) || std::fabs(v) > 9e15)
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is not an integer");
  return static_cast<long>(v);
}

bool Config::get_bool(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) throw ConfigError(origin_ + ": missing key '" + section + "." + key + "'");
  if (v->index() != 2)
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is a " + kind_name(*v) +
                      ", expected boolean");
  return std::get<bool>(*v);
}

std::vector<double> Config::get_array(const std::string& section, const std::string& key) const {
  const Value* v = find(section, key);
  if (!v) throw ConfigError(origin_ + ": missing key '" + section + "." + key + "'");
  if (v->index() == 1) return {std::get<double>(*v)};  // scalar promotes to 1-element grid
  if (v->index() != 3)
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is a " + kind_name(*v) +
                      ", expected array");
  return std::get<std::vector<double>>(*v);
}

std::vector<long> Config::get_int_array(const std::string& section, const std::string& key) const {
  auto xs = get_array(section, key);
  std::vector<long> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x != std::floor(x) || std::fabs(x) > 9e15)
      throw ConfigError(origin_ + ": key '" + section + "." + key + "' has non-integer entries");
    out.push_back(static_cast<long>(x));
  }
  return out;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

double Config::get_number(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key, long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  return has(section, key) ? get_bool(section, key) : fallback;
}

}  // namespace stein_bounds

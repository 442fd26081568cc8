#include "avos/core/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "avos/core/errors.hpp"

namespace avos {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

Config::Value parse_value(std::string_view raw, int line_no) {
  const auto fail = [&](const char* what) {
    return ParseError("config line " + std::to_string(line_no) + ": " + what);
  };
  if (raw.empty()) throw fail("missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw fail("unterminated string");
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  const bool looks_float = raw.find_first_of(".eE") != std::string_view::npos;
  if (!looks_float) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
    if (ec == std::errc() && p == raw.data() + raw.size()) return v;
  }
  double d = 0.0;
  auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), d);
  if (ec != std::errc() || p != raw.data() + raw.size()) throw fail("unsupported value");
  return d;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    std::string_view line = trim(strip_comment(text.substr(pos, end - pos)));
    pos = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("config line " + std::to_string(line_no) + ": bad section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] =
        parse_value(trim(line.substr(eq + 1)), line_no);
    if (end == text.size()) break;
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* d = std::get_if<double>(&it->second)) return *d;
  if (auto* i = std::get_if<int64_t>(&it->second)) return static_cast<double>(*i);
  throw ParseError("config key " + key + " is not numeric");
}

int64_t Config::get_int(const std::string& key, int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* i = std::get_if<int64_t>(&it->second)) return *i;
  throw ParseError("config key " + key + " is not an integer");
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* b = std::get_if<bool>(&it->second)) return *b;
  throw ParseError("config key " + key + " is not a boolean");
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (auto* s = std::get_if<std::string>(&it->second)) return *s;
  throw ParseError("config key " + key + " is not a string");
}

}  // namespace avos

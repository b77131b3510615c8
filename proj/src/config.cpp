#include "neurodob/config.hpp"

#include <sstream>

#include "neurodob/errors.hpp"
#include "neurodob/text.hpp"

namespace ndob {

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ConfigError("bad section header at line " +
                          std::to_string(lineno) + ": " + line);
      }
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno) + ": " + line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("empty key at line " + std::to_string(lineno));
    }
    if (section.empty()) {
      throw ConfigError("key outside any [section] at line " +
                        std::to_string(lineno));
    }
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

Config Config::parse_file(const std::string& path) {
  return parse_string(read_file(path));
}

bool Config::has(const std::string& section, const std::string& key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get_str(const std::string& section,
                            const std::string& key) const {
  const auto s = sections_.find(section);
  if (s != sections_.end()) {
    const auto k = s->second.find(key);
    if (k != s->second.end()) return k->second;
  }
  throw ConfigError("missing config key [" + section + "] " + key);
}

std::string Config::get_str(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? get_str(section, key) : fallback;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
  try {
    return parse_double(get_str(section, key));
  } catch (const IoFailure& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  return has(section, key) ? get_double(section, key) : fallback;
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
  if (!has(section, key)) return fallback;
  try {
    return parse_int(get_str(section, key));
  } catch (const IoFailure& e) {
    throw ConfigError("[" + section + "] " + key + ": " + e.what());
  }
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  std::string value = get_str(section, key);
  for (auto& c : value) {
    if (c == ',') c = ' ';
  }
  std::vector<double> out;
  for (const auto& tok : split_ws(value)) {
    try {
      out.push_back(parse_double(tok));
    } catch (const IoFailure& e) {
      throw ConfigError("[" + section + "] " + key + ": " + e.what());
    }
  }
  return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
  sections_[section][key] = value;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value: " +
                      assignment);
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));
  if (section.empty() || key.empty()) {
    throw ConfigError("override must look like section.key=value: " +
                      assignment);
  }
  set(section, key, value);
}

std::string Config::dump() const {
  std::string out;
  for (const auto& [section, keys] : sections_) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : keys) {
      out += key + " = " + value + "\n";
    }
  }
  return out;
}

}  // namespace ndob

#pragma once

#include <map>
#include <string>
#include <vector>

namespace ndob {

/// Sectioned key-value configuration:
///
///   # comment
///   [vehicle]
///   m = 1274
///   ...
///
/// Keys are unique within a section, values are free text until end of line.
/// Later assignments override earlier ones (used for per-flag overrides).
class Config {
 public:
  Config() = default;

  static Config parse_string(const std::string& text);
  static Config parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;

  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const;
  /// Comma- or whitespace-separated list of doubles.
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;

  void set(const std::string& section, const std::string& key,
           const std::string& value);

  /// Applies an override of the form "section.key=value".
  void apply_override(const std::string& assignment);

  /// Canonical serialization (sections and keys sorted); used for hashing
  /// run metadata.
  std::string dump() const;

  const std::map<std::string, std::map<std::string, std::string>>& sections()
      const {
    return sections_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

}  // namespace ndob

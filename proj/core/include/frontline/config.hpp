#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace frontline {

/// Flat key = value text. "[section]" headers prefix the keys that follow
/// with "section."; '#' starts a comment. Every key must be namespaced.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config parse_text(const std::string& text, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const;
  std::string string(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int fallback) const;

  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key);

  /// Rejects keys outside `allowed`, naming the line of the first offender.
  void check_known(const std::set<std::string>& allowed) const;

  std::vector<std::string> keys() const;
  const std::string& source() const noexcept { return source_; }
  /// Sorted key = value lines; parse(dump()) reproduces the config.
  std::string dump() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace frontline

#include "frontline/config.hpp"

#include <fstream>
#include <sstream>

#include "frontline/error.hpp"

namespace frontline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const std::string& source, int line) {
  return line > 0 ? source + ":" + std::to_string(line) : source;
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        raise(ErrorCode::ConfigError, where(source, line_no) + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      raise(ErrorCode::ConfigError, where(source, line_no) + ": expected key = value, got '" + line + "'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raise(ErrorCode::ConfigError, where(source, line_no) + ": empty key");
    if (!section.empty()) key = section + "." + key;
    if (key.find('.') == std::string::npos) {
      raise(ErrorCode::ConfigError, where(source, line_no) + ": key '" + key + "' needs a section (problem., mesh., ...)");
    }
    if (cfg.entries_.count(key)) {
      raise(ErrorCode::ConfigError, where(source, line_no) + ": duplicate key '" + key + "'");
    }
    cfg.entries_[key] = {value, line_no};
  }
  return cfg;
}

Config Config::parse_text(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  return parse(in, source);
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ConfigError, "cannot open config " + path.string());
  return parse(in, path.string());
}

void Config::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  const int line = it == entries_.end() ? 0 : it->second.line;
  raise(ErrorCode::ConfigError, where(source_, line) + ": field '" + key + "' " + what);
}

bool Config::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string Config::string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) fail(key, "is missing");
  return it->second.value;
}

std::string Config::string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

double Config::number(const std::string& key) const {
  const std::string text = string(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) fail(key, "has trailing characters in '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "is not a number: '" + text + "'");
  }
}

double Config::number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

int Config::integer(const std::string& key) const {
  const std::string text = string(key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) fail(key, "is not an integer: '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail(key, "is not an integer: '" + text + "'");
  }
}

int Config::integer_or(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

void Config::set(const std::string& key, const std::string& value) {
  auto& e = entries_[key];
  e.value = value;
}

void Config::erase(const std::string& key) { entries_.erase(key); }

void Config::check_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, entry] : entries_) {
    if (!allowed.count(key)) fail(key, "is not recognised");
  }
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : entries_) out.push_back(key);
  return out;
}

std::string Config::dump() const {
  std::ostringstream os;
  for (const auto& [key, entry] : entries_) os << key << " = " << entry.value << '\n';
  return os.str();
}

}  // namespace frontline

#include "hybridcast/config.hpp"

#include "hybridcast/csv.hpp"
#include "hybridcast/errors.hpp"

namespace hybridcast {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::string section;
  const auto lines = csv::lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(i + 1) + ": unterminated section");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(i + 1) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(i + 1) + ": empty key");
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    cfg.values_[std::move(full)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

const std::string* ConfigFile::get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  return it == values_.end() ? nullptr : &it->second;
}

}  // namespace hybridcast

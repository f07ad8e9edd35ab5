#pragma once

#include <map>
#include <string>
#include <string_view>

namespace hybridcast {

/// Flat view of a `key = value` file with `[section]` headers; keys are stored as
/// `section.key`. `#` and `;` start comments.
class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);

  bool has(std::string_view key) const { return values_.find(std::string(key)) != values_.end(); }
  const std::string* get(std::string_view key) const;
  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace hybridcast

#pragma once

#include <stdexcept>
#include <string>

namespace hybridcast {

/// Malformed or inconsistent input data (bad CSV row, empty join, zero actual...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or caller-supplied parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hybridcast

#pragma once

#include <stdexcept>
#include <string>

namespace fdid {

// Bad input, inconsistent dimensions or an unsupported option.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The computation itself failed: rank deficiency, blow-up, failed validation.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace fdid

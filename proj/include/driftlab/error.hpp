#pragma once

#include <stdexcept>
#include <string>

namespace drift {

/// Thrown when an operation is called with arguments outside its contract
/// (bad window, infeasible walk parameters, unsorted fitness vector, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ConfigError(message);
}

}  // namespace drift

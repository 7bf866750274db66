#pragma once

#include <stdexcept>

namespace ringmix {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

// Invalid configuration / violated precondition. CLI maps this to exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Runtime pathology: blown step budget, corrupt store, singular system, ...
struct RunError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ringmix

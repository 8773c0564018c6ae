#pragma once

#include <stdexcept>
#include <string>

namespace dhedge {

// Malformed or out-of-contract input (bad CSV, invalid config, empty split).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// A checkpoint or artifact does not match the panel/config it is used with.
class IncompatibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Environment misuse, e.g. stepping after the episode is done.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dhedge

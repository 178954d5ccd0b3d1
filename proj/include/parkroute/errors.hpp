#pragma once

#include <stdexcept>
#include <string>

namespace parkroute {

/// Invalid network, configuration, or parameter combination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a weight parameter produces a negative cycle.
class InfeasibleAlpha : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// A reward or route query touched a state with no route to the destination.
class RoutingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parkroute

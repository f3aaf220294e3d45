#pragma once

#include <stdexcept>

namespace consensus {

// A neighbor was read over a channel that does not exist in the base graph.
class InvalidReception : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical certificate (SIA, stationary vector) could not be produced
// within its iteration budget.
class CertificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The augmented representation could not cover a read; indicates the run
// violates the window bound it was decomposed with.
class WindowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario or config failed validation.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace consensus

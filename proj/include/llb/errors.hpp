#pragma once

#include <stdexcept>
#include <string>

namespace llb {

/// Invalid domain, model or solver configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Operands built on different bases, or arrays of the wrong size.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The requested integral is not resolved by the available quadrature.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state, stability guard violation or an audit precondition.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace llb

#pragma once

#include <stdexcept>
#include <string>

namespace chainrt {

/// A mathematical precondition or validation failed (d^2 != 0, a map that
/// is not an intertwiner, division by zero, ...).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Arguments with incompatible shapes or malformed structure.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace chainrt

#pragma once

#include <stdexcept>
#include <string>

namespace sg2caps {

// Input data violated a schema or graph invariant. CLI exit code 1.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: shape mismatch, non-finite intermediate, bad
// checkpoint. CLI exit code 2.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class ShapeError : public NumericError {
 public:
  explicit ShapeError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace sg2caps

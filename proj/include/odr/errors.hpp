#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odr {

// Bad parameter or malformed configuration. CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric failure (non-convergence, truncation overflow). CLI exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase-lock loop left the capture range.
class LockLossError : public NumericError {
 public:
  explicit LockLossError(std::size_t window)
      : NumericError("phase lock lost at window " + std::to_string(window)),
        window_(window) {}

  std::size_t window() const { return window_; }

 private:
  std::size_t window_;
};

}  // namespace odr

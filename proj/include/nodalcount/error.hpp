// Exception types shared by every nodalcount module.
#pragma once

#include <stdexcept>
#include <string>

namespace nodalcount {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension argument outside the allowed range (n = 0, n < 2 for GOE, ...).
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

/// Non-finite entries, empty samples, probabilities outside [0,1], ...
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Population standard deviation is zero, so no affine normalization exists.
class ZeroVariance : public Error {
 public:
  using Error::Error;
};

/// A construction hit a zero-norm vector.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Rejected experiment configuration; the CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nodalcount

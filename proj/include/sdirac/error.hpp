#pragma once

#include <stdexcept>
#include <string>

namespace sdirac {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejected input: malformed problem, spectral data or file.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to deliver a result at the requested tolerance.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace sdirac

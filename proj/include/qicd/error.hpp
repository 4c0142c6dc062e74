#pragma once

#include <stdexcept>
#include <string>

namespace qicd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input is outside the domain of the operation (bad range, unknown key, malformed value).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inputs are individually valid but describe an unphysical state or channel.
class PhysicalityError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or could not be bracketed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A Fock-space truncation is too small for the requested tail tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

}  // namespace qicd

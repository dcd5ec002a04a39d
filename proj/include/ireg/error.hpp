#pragma once

#include <stdexcept>
#include <string>

namespace ireg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called with arguments that violate its preconditions
/// (bad dimensions, out-of-range indices, non-finite data, unknown names).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a meaningful result
/// (zero column in a least-squares solve, too few usable singular values).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed or the file content is malformed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ireg

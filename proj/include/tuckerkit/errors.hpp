#pragma once

#include <stdexcept>
#include <string>

namespace tuckerkit {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shape, mode-index or rank-argument mismatch.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or an input the numerics cannot handle (e.g. a zero tensor
// where a relative quantity is required).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed TNSR1 stream or raw import of the wrong length.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tuckerkit

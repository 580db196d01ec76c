#pragma once

#include <stdexcept>
#include <string>

namespace metaland {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input text or document does not follow the documented wire format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input is well formed but inconsistent (missing quote, unknown parcel, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Caller passed arguments outside the documented ranges.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace metaland

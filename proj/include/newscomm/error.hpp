#pragma once

#include <stdexcept>
#include <string>

namespace newscomm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (corpus rows, lexicon files, configs).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Caller misuse: bad arguments, unknown names, violated preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace newscomm

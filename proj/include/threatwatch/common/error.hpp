#pragma once

#include <stdexcept>
#include <string>

namespace threatwatch {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed external input: JSON lines, config files, timestamps.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an operation's arguments does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace threatwatch

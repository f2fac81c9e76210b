#pragma once

#include <stdexcept>
#include <string>

namespace annrel {

/// Base class for every failure the toolkit reports.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Caller violated a contract (unknown label, bad range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Computation cannot proceed (e.g. model fit on an empty matrix).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace annrel

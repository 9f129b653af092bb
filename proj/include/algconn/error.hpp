#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace algconn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid call: wrong graph kind, bad parameter, incompatible strategy.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input data problem: malformed file, empty component, graph not connected.
class DataError : public Error {
 public:
  using Error::Error;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An iterative kernel failed to converge or produced an unusable value.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace algconn

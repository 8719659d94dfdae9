#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace infuser {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or malformed input files.
class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public IoError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A request that is well-formed but violates a problem constraint
// (K > n, too many edges for exhaustive enumeration, parameters out of range).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

}  // namespace infuser

#pragma once

#include <stdexcept>
#include <string>

namespace adjustkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownNodeError : public Error {
 public:
  using Error::Error;
};

// Raised when a graph violates the invariants of its declared class.
class GraphInvariantError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotAmenableError : public Error {
 public:
  using Error::Error;
};

// Singular design or covariance matrices.
class NumericError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& msg)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace adjustkit

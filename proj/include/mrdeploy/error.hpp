#pragma once

#include <stdexcept>
#include <string>

namespace mrdeploy {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong in planning" catch this one.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

class InvalidSourceError : public Error {
 public:
  using Error::Error;
};

class UnreachableError : public Error {
 public:
  using Error::Error;
};

// Gradient descent made no progress. Signals a malformed field.
class DescentStallError : public Error {
 public:
  using Error::Error;
};

class InvalidEndpointError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrdeploy

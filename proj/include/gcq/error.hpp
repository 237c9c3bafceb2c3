#pragma once

#include <stdexcept>
#include <string>

namespace gcq {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SortError : public Error {
 public:
  using Error::Error;
};

class SignatureError : public Error {
 public:
  using Error::Error;
};

/// Raised when a bounded search runs out of steps before reaching a verdict.
/// Distinct from a negative answer.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

}  // namespace gcq

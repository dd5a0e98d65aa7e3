#pragma once

#include <stdexcept>
#include <string>

namespace selci {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class NumericInput : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a Gram matrix is singular or worse conditioned than the guard.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, double condition)
      : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}

  [[nodiscard]] double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class InvalidTruncation : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace selci

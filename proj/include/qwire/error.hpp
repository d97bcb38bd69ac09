#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qwire {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text; `offset` is the byte position of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Arithmetic outside the real domain (division by zero, log of a negative, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value violates a documented precondition or type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// -1 is an eigenvalue of U, so no Hermitian Cayley operator exists.
class CayleySingular : public Error {
 public:
  using Error::Error;
};

/// Numerical failure that can usually be fixed by finer sampling or tolerances.
class NumericError : public Error {
 public:
  using Error::Error;
};

class UnresolvedCluster : public NumericError {
 public:
  using NumericError::NumericError;
};

class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qwire

#pragma once

#include <stdexcept>
#include <string>

namespace schurdil {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes that do not fit together, or sizes past a configured cap.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the operation's domain (p < 1, zero matrix, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical kernel failed (eigensolver non-convergence, ambiguous rank).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Symbol rejected by a certification workflow (not Hermitian PSD unit-diagonal).
class InvalidSymbolError : public Error {
 public:
  using Error::Error;
};

/// Malformed or schema-violating input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace schurdil

#pragma once

#include <stdexcept>
#include <string>

namespace unitforge {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class FactorizationIncomplete : public Error {
 public:
  explicit FactorizationIncomplete(const std::string& what) : Error(what) {}
};

class NormMinusOne : public Error {
 public:
  explicit NormMinusOne(const std::string& what) : Error(what) {}
};

class DegenerateBeta : public Error {
 public:
  explicit DegenerateBeta(const std::string& what) : Error(what) {}
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

class CoercionFailure : public Error {
 public:
  explicit CoercionFailure(const std::string& what) : Error(what) {}
};

class PreconditionUnverifiable : public Error {
 public:
  explicit PreconditionUnverifiable(const std::string& what) : Error(what) {}
};

class BadResidue : public Error {
 public:
  explicit BadResidue(const std::string& what) : Error(what) {}
};

class NotSquareFree : public Error {
 public:
  explicit NotSquareFree(const std::string& what) : Error(what) {}
};

class BadPrime : public Error {
 public:
  explicit BadPrime(const std::string& what) : Error(what) {}
};

class InsufficientFamilies : public Error {
 public:
  explicit InsufficientFamilies(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class NotClassical : public Error {
 public:
  explicit NotClassical(const std::string& what) : Error(what) {}
};

class NotUnit : public Error {
 public:
  explicit NotUnit(const std::string& what) : Error(what) {}
};

class NotTotallyPositiveUnit : public Error {
 public:
  explicit NotTotallyPositiveUnit(const std::string& what) : Error(what) {}
};

class NonDiagonal : public Error {
 public:
  explicit NonDiagonal(const std::string& what) : Error(what) {}
};

class UnsupportedBase : public Error {
 public:
  explicit UnsupportedBase(const std::string& what) : Error(what) {}
};

class RepresentationNotFound : public Error {
 public:
  explicit RepresentationNotFound(const std::string& what) : Error(what) {}
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

class NotIntegral : public Error {
 public:
  explicit NotIntegral(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace unitforge

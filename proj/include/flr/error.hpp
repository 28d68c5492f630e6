#pragma once

#include <stdexcept>
#include <string>

namespace flr {

// Root of every exception thrown by the library. The CLI maps these onto exit
// codes, so each subclass corresponds to one failure category.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ScenarioError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGraph : public Error {
 public:
  using Error::Error;
};

class DegenerateColumn : public Error {
 public:
  DegenerateColumn(int column, const std::string& what) : Error(what), column_(column) {}
  int column() const noexcept { return column_; }

 private:
  int column_;
};

// Raised when a linear system that must be positive definite is not.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public SingularSystem {
 public:
  FactorizationError(int pivot, const std::string& what) : SingularSystem(what), pivot_(pivot) {}
  int pivot() const noexcept { return pivot_; }

 private:
  int pivot_;
};

// CG breakdown: p^T Q p <= 0 for some search direction.
class OperatorNotPD : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace flr

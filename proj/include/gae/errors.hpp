#pragma once

#include <stdexcept>
#include <string>

namespace gae {

// Base for every error the library raises. Callers that only want a message
// can catch this; the subclasses exist so tests and the CLI can tell failure
// modes apart.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ErgodicityError : public Error {
 public:
  using Error::Error;
};

class PartitionError : public Error {
 public:
  using Error::Error;
};

class GroupStructureError : public Error {
 public:
  using Error::Error;
};

class HomomorphismError : public Error {
 public:
  using Error::Error;
};

class LiftingError : public Error {
 public:
  using Error::Error;
};

class ObservationError : public Error {
 public:
  using Error::Error;
};

class EmptyTraceError : public Error {
 public:
  using Error::Error;
};

class ArithmeticError : public Error {
 public:
  using Error::Error;
};

class ComparisonError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace gae

#pragma once

#include <stdexcept>
#include <string>

namespace scoreinf {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed specs, configs, edges, data files.
class InputError : public Error {
 public:
  using Error::Error;
};

class InvalidEdgeError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidSpecError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class EmptyDataError : public InputError {
 public:
  using InputError::InputError;
};

class DimensionMismatchError : public InputError {
 public:
  using InputError::InputError;
};

// Failures of the numerics on otherwise well-formed input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class InfeasibleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverparameterizedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateVarianceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace scoreinf

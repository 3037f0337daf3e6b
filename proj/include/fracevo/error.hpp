#pragma once

#include <stdexcept>
#include <string>

namespace fracevo {

/// Base of every error raised by the library. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (t <= 0, s on the branch cut, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Gamma evaluated at a non-positive integer.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters or weight specification.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Resolvent requested at a point of the spectrum.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// A contour node produced a non-finite value, or the transform is not
/// conjugate symmetric.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Jet order above the supported cap.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// The subordination tail search ran past its cap.
class TailNotConvergedError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracevo

#pragma once

#include <stdexcept>
#include <string>

namespace sierpinski {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, e.g. "resource".
  virtual const char *kind() const noexcept { return "error"; }
};

/// A configured size cap (graph level, matrix dimension) would be exceeded.
class ResourceError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "resource"; }
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "domain"; }
};

/// A precondition on indices, vertices or shapes was violated.
class ContractError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "contract"; }
};

/// Two functions that must live on the same graph do not.
class GraphMismatchError : public ContractError {
public:
  using ContractError::ContractError;
  const char *kind() const noexcept override { return "graph_mismatch"; }
};

/// Eigenfunction extension was asked to continue through a forbidden value.
class ForbiddenEigenvalueError : public DomainError {
public:
  using DomainError::DomainError;
  const char *kind() const noexcept override { return "forbidden_eigenvalue"; }
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "convergence"; }
};

/// Not enough data points to perform a fit.
class InsufficientDataError : public Error {
public:
  using Error::Error;
  const char *kind() const noexcept override { return "insufficient_data"; }
};

} // namespace sierpinski

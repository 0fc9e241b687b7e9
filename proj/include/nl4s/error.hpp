#pragma once

#include <stdexcept>
#include <string>

namespace nl4s {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside the domain an operation is defined on.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Fields or grids that do not belong together.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

// Iterative solver failed to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

// Snapshot or configuration file is malformed.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace nl4s

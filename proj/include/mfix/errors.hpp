#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mfix {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch: wrong number of components, wrong component dimension,
/// index out of range, incompatible bivariate maps.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An operator produced a non-finite value.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, std::size_t component)
      : Error(what), component_(component) {}

  std::size_t component() const noexcept { return component_; }

 private:
  std::size_t component_;
};

/// Invalid user-supplied parameters (tolerances, boxes, grid sizes, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A declared hypothesis (signature, comparison function, bounds) failed its
/// sampled check.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mfix

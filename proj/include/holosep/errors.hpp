#pragma once

#include <stdexcept>
#include <string>

namespace holosep {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (shape, Hermiticity, spanning, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The endpoint overlap matrix of a section is not positive definite.
class InPhaseError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace holosep

#pragma once

#include <stdexcept>
#include <string>

namespace hemoflow {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Physically invalid input (non-positive area, bad moduli, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration (bad CFL, too few cells, missing file, ...).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed input file; carries a human-readable location.
class SchemaError : public Error {
public:
  using Error::Error;
};

/// Failure inside the finite-volume solver (positivity loss, hyperbolicity
/// loss, boundary solve divergence, time-step collapse).
class SolverError : public Error {
public:
  using Error::Error;
};

/// Failure inside the training loop (non-finite loss or gradient).
class TrainError : public Error {
public:
  using Error::Error;
};

} // namespace hemoflow

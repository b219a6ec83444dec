#pragma once

#include <stdexcept>
#include <string>

namespace oppaccess {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (negative time, collision budget outside (0,1), bad index, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unusable sample data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent traffic model (non-stochastic matrix, reducible chain, ...).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A numeric solve could not be carried out (target outside bracket, ...).
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A strategy could not be constructed from the given parameters.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace oppaccess

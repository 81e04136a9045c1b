#pragma once

#include <stdexcept>
#include <string>

namespace nlpc {

/// Base of every library error. Domain errors describe physically or
/// numerically impossible requests; config errors describe bad input files.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// materials
class OutOfRange : public DomainError {
 public:
  using DomainError::DomainError;
};
class UnknownMaterial : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// bandstructure / blochmodes
class DegenerateLayer : public DomainError {
 public:
  using DomainError::DomainError;
};
class NoBirefringence : public DomainError {
 public:
  using DomainError::DomainError;
};
class EvanescentMode : public DomainError {
 public:
  using DomainError::DomainError;
};

// phasematch
class EmptyScan : public DomainError {
 public:
  using DomainError::DomainError;
};
class NoIntersection : public DomainError {
 public:
  using DomainError::DomainError;
};
class DegenerateOverlap : public DomainError {
 public:
  using DomainError::DomainError;
};

// efficiency
class NotUnit : public DomainError {
 public:
  using DomainError::DomainError;
};
class ZeroVector : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace nlpc

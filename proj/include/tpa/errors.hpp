#pragma once

#include <stdexcept>
#include <string>

namespace tpa {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (non-finite input, zero detuning, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A numerical estimate failed its own convergence check.
class AccuracyError : public Error {
public:
  using Error::Error;
};

/// The caller asked for something that is not defined for these inputs.
class UsageError : public Error {
public:
  using Error::Error;
};

/// A request would exceed a configured memory cap.
class ResourceError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace tpa

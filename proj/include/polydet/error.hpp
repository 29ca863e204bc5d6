#pragma once

#include <stdexcept>
#include <string>

namespace polydet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid region description or geometric precondition.
class GeometryError : public Error {
 public:
  using Error::Error;
};

class ConnectionError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operator that must be positive definite produces a
/// nonpositive pivot.
class FactorizationError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class StoreError : public Error {
 public:
  using Error::Error;
};

/// User-facing configuration problems (bad flags, unreadable files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace polydet

#pragma once

#include <stdexcept>
#include <string>

namespace glider {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite or otherwise malformed arguments.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A glide angle outside the configured set, or a ballast state that does not
/// match the glide direction.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Glider model parameters that cannot produce a positive finite speed.
class ModelConfigError : public Error {
 public:
  using Error::Error;
};

/// Two positions that cannot form a steering problem (coincident horizontal
/// positions, equal depths, identical averaging depths).
class DegenerateEdge : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Failure to read or validate a field, model, scenario or sweep document.
/// `where()` names the offending JSON location.
class LoadError : public Error {
 public:
  LoadError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace glider

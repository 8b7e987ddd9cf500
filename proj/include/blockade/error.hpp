#pragma once

#include <stdexcept>
#include <string>

namespace blockade {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

// Raised when the Liouvillian has more than one stationary state.
class AmbiguousSteadyState : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Conditional state after photon detection has vanishing norm.
class NoDetectablePhotons : public Error {
 public:
  using Error::Error;
};

// Normalized correlation requested for a field with <a^dag a> ~ 0.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

}  // namespace blockade

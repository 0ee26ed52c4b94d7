#pragma once

#include <stdexcept>
#include <string>

namespace modwalk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// The requested computation is not defined for this kind of input
/// (e.g. an exact law for a continuous step).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A support or work budget would be exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

/// A quadratic form that must be nonnegative came out negative beyond
/// its tolerance.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace modwalk

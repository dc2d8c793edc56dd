#pragma once

#include <stdexcept>
#include <string>

namespace swdelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class NotMetzler : public Error {
 public:
  using Error::Error;
};

class NotPositive : public Error {
 public:
  using Error::Error;
};

class NotStable : public Error {
 public:
  using Error::Error;
};

class NegativeStructure : public Error {
 public:
  using Error::Error;
};

class NotPositiveBound : public Error {
 public:
  using Error::Error;
};

class NotHurwitzBound : public Error {
 public:
  using Error::Error;
};

class DominationViolated : public Error {
 public:
  using Error::Error;
};

class StructureNotDominating : public Error {
 public:
  using Error::Error;
};

/// The simplex method hit its pivot budget. Never reported as infeasibility.
class IterationLimit : public Error {
 public:
  using Error::Error;
};

/// Step size does not divide a delay, a schedule duration or the history span.
class StepMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed system/disturbance document. The message carries a JSON path.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace swdelay

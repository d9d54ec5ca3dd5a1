#pragma once

#include <stdexcept>
#include <string>

namespace chi2lab {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A value failed the invariant of the type it was being promoted to
// (not Hermitian, not PSD, not PD, not unit trace, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// Negative power requested of a singular operator without opting into the
// support-restricted pseudo-power.
class SingularityError : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class FunctionEvaluationError : public Error {
 public:
  using Error::Error;
};

class IllConditionedProbe : public Error {
 public:
  using Error::Error;
};

class InconsistentOracle : public Error {
 public:
  using Error::Error;
};

class NotASymmetry : public Error {
 public:
  using Error::Error;
};

}  // namespace chi2lab

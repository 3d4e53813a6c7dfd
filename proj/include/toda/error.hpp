#pragma once

#include <stdexcept>
#include <string>

namespace toda {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition or type invariant.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalError : public Error {
public:
  using Error::Error;
};

class ConvergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DegenerateMeasureError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class PositivityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class PoleProximityError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class BlowUpError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace toda

#pragma once

#include <stdexcept>
#include <string>

namespace fracsh {

/// Rejected input: inadmissible parameters, wrong sign, bad configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation ran but produced an unusable result (blow-up, resolution
/// guard violation, NaN).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Process exit codes used by the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitNumeric = 3,
  kExitThreshold = 4,
};

}  // namespace fracsh

#pragma once

#include <stdexcept>
#include <string>

namespace phnls {

/// Bad parameters, config values, or mismatched inputs.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// (a, b) violates the admissibility constraints of the scaling family.
class InvalidScalePair : public ValidationError {
public:
  using ValidationError::ValidationError;
};

/// An iterative solver exhausted its budget.
class NonConvergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Iterates of the ground-state solver decayed to zero.
class CollapseToZero : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace phnls

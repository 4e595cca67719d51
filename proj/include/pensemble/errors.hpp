#pragma once

#include <stdexcept>
#include <string>

namespace pens {

// Errors that map to CLI exit code 2 (usage / bad arguments).
struct InvalidDimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// d_B1 = 1 decouples the bath; thermalization times are undefined.
struct NoThermalizationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Errors that map to CLI exit code 3 (resource limits).
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical-degeneracy and inconsistency conditions.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateStateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IllConditionedRatioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pens

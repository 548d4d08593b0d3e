#pragma once

#include <stdexcept>
#include <string>

namespace lcvx {

// Malformed data: wrong dimensions, non-finite entries, inconsistent sizes.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed data with an out-of-range scalar argument (dt <= 0, N < 1, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input set fails the cross-polytope hull requirements.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A mathematical precondition of the pipeline does not hold (e.g. the plant
// is not controllable, or a solution is not optimal).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcvx

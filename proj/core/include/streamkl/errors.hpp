#pragma once

#include <stdexcept>

namespace streamkl {

// Numerical breakdown: singular normal equations, non-finite updates.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A requested construction exceeds a configured size cap.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dataset / manifest problems. The message carries the offending row
// index when one is known.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A structural invariant (e.g. uniform frequency) does not hold.
struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace streamkl

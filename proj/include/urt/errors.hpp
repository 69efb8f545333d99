#pragma once
#include <stdexcept>
#include <string>

namespace urt {

// Invalid argument values (out-of-domain parameters, malformed inputs).
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A requested quantity cannot be produced from the information supplied
// (missing moments, unsupported model, not enough data).
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative routine failed to converge or became numerically unstable.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace urt

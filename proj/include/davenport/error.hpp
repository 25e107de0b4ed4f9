#pragma once

#include <stdexcept>
#include <string>

namespace davenport {

// Malformed user input: bad moduli, bad weight syntax, out-of-range elements.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A configured size or rank cap was exceeded.
struct LimitExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A construction produced a sequence that failed verification. This would
// falsify the implementation, so it is never caught internally.
struct VerificationFailure : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace davenport

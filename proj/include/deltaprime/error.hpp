#pragma once

#include <stdexcept>
#include <string>

namespace deltaprime {

/// Bad flags, malformed profile files, violated preconditions.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integration breakdown, singular linear systems, non-finite state.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by coupling() when alpha is not a root of the Neumann mismatch.
class NotResonant : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

}  // namespace deltaprime

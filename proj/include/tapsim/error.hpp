#pragma once

#include <stdexcept>
#include <string>

namespace tapsim {

/// Raised when an operation's precondition or a type invariant is violated.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tapsim

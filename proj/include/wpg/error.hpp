#pragma once

#include <stdexcept>

namespace wpg {

// Caller supplied a value outside an operation's domain.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// parent() of the root.
class RootHasNoParent : public std::logic_error {
 public:
  RootHasNoParent() : std::logic_error("the root vertex has no parent") {}
};

// Exhaustive enumeration would exceed the configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal identity failed to hold (e.g. nonzero remainder in an exact
// division that must be exact).
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Selects the serial reference loop or the OpenMP kernel.
enum class Exec { serial, parallel };

}  // namespace wpg

#pragma once

#include <stdexcept>
#include <string>

namespace sasano {

// Malformed input: bad files, unparsable expressions, violated preconditions
// on user-supplied data. Maps to CLI exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A computed object failed an exact check. Maps to CLI exit code 1.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TowerMismatch : public std::invalid_argument {
 public:
  TowerMismatch() : std::invalid_argument("operands belong to different field towers") {}
};

class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero() : std::domain_error("division by zero") {}
};

}  // namespace sasano

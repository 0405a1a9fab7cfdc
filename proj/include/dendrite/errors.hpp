#pragma once

#include <stdexcept>
#include <string>

namespace dendrite {

// Bad input values or preconditions (CLI exit code 3).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested level beyond the configured maximum (CLI exit code 4).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Process-wide level cap. Initialised from DENDRITE_MAX_LEVEL, default 12.
int max_level();
void set_max_level(int level);
void check_level(int level);

}  // namespace dendrite

#pragma once

#include <stdexcept>
#include <string>

namespace oiltrade {

// Bad input data: malformed records, non-finite weights, unknown names.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Illegal state transition, e.g. shocking an element that is already masked.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace oiltrade

#pragma once

#include <stdexcept>
#include <string>

namespace qshift {

// Malformed arguments or data (bad margins, empty samples, non-finite values).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// An exact computation would exceed its enumeration budget; callers should
// switch to the large-sample approximation.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A result is undefined for this input (e.g. the G² minimum sits only on an
// unbounded end segment).
class FeasibilityError : public std::runtime_error {
 public:
  explicit FeasibilityError(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace qshift

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace thinspan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax. `position` is a 0-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class TypeError : public Error {
 public:
  using Error::Error;
};

/// An intersection type (or point, or morphism) does not refine the simple
/// type it is used at.
class RefinementError : public Error {
 public:
  using Error::Error;
};

/// Enumeration over a term with β-redexes was requested without a budget.
class BudgetRequired : public Error {
 public:
  using Error::Error;
};

/// A theorem-guaranteed property failed: always an implementation bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace thinspan

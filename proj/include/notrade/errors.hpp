#pragma once

#include <stdexcept>
#include <string>

namespace notrade {

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NotMonotone : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a boundary slice can no longer be inverted (lost strict monotonicity).
class BoundaryNotInvertible : public std::runtime_error {
 public:
  BoundaryNotInvertible(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

class SingularityOnGrid : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace notrade

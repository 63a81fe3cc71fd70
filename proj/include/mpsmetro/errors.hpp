#pragma once

#include <stdexcept>
#include <string>

namespace mpsmetro {

// Argument outside the mathematical domain of an operation (negative counts,
// k > n, eta outside [0, 1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Amplitude vector (or MPS) that induces the zero vector.
class DegenerateStateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Conditional state requested for a loss branch of zero probability.
class EmptyBranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Request beyond a documented size cap (exact oracle, direct optimizer).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precision undefined: non-positive Fisher information, vanishing signal or
// total loss.
class UndefinedPrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mpsmetro

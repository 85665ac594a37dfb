#pragma once

#include <stdexcept>
#include <string>

namespace spantri {

/// Bad arguments: out-of-regime (n, k), a >= b, p outside [0, 1], ...
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that is not even a well-formed rotation system (dangling ids,
/// asymmetric adjacency). Distinct from a triangulation invariant failing.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A constructor could not realise the requested (n, k).
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or search hit its configured node budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent computations of the same quantity disagreed.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace spantri

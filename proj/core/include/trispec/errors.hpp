#pragma once

#include <stdexcept>
#include <string>

namespace trispec {

/// Precondition on a mathematical input failed (bad triangle, out-of-range
/// degree, query outside the represented part of a measure, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A computation would exceed a table size or memory budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A smoothing kernel could not be built to the requested accuracy.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace trispec

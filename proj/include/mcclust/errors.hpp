#pragma once

#include <stdexcept>
#include <string>

namespace mcclust {

// Malformed indices, out-of-range tokens, inconsistent table shapes.
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument values (bad masses, empty test sets, inconsistent specs).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Unnormalizable conditionals and other numeric breakdowns.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Removing an observation that is not represented in the sufficient stats.
struct StateCorruptionError : std::runtime_error {
  explicit StateCorruptionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mcclust

#pragma once

#include <stdexcept>
#include <string>

namespace uet {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A vector does not match the declared state-space dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An evaluation produced NaN or Inf; the message carries the offending sample.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// A catalog constructor refused its inputs (zero of f, semigroup law broken,
/// invalid rate function). The message carries the witness.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// A precondition check (compatibility, commutation) failed; the refusing
/// operation attaches the failing condition and witness.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

/// Scenario file is malformed; the message carries the field path.
class ScenarioError : public Error {
 public:
  using Error::Error;
};

}  // namespace uet

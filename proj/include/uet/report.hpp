#pragma once

#include <optional>
#include <string>
#include <vector>

#include "uet/linalg.hpp"
#include "uet/sampling.hpp"

namespace uet {

/// Worst sample of a checked condition. For time-only checks the triple is
/// degenerate (t = s = t0); for pair checks s = t.
struct Witness {
  TimeTriple when;
  std::string vector_id;
  std::string detail;  // sub-case, e.g. "stable*unstable" or "k=center"
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of one checked condition over the whole grid.
///
/// margin is min over non-vacuous samples of (allowed rhs - lhs); the
/// condition passes iff margin >= 0. For residual-style conditions
/// worst_residual additionally records max of r / (1 + ||reference||).
struct ConditionResult {
  std::string id;
  bool passed = true;
  std::optional<double> margin;
  std::optional<double> worst_residual;
  long samples = 0;  // non-vacuous samples evaluated
  long vacuous = 0;
  std::optional<Witness> witness;
  std::string note;
};

struct ComplianceReport {
  std::vector<ConditionResult> entries;
  std::string norm;
  double tol = 0.0;

  bool passed() const {
    for (const auto& e : entries)
      if (!e.passed) return false;
    return true;
  }

  const ConditionResult* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }

  const ConditionResult* first_failure() const {
    for (const auto& e : entries)
      if (!e.passed) return &e;
    return nullptr;
  }
};

}  // namespace uet

#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "uet/report.hpp"

namespace uet::detail {

/// One evaluated sample of a condition sweep.
struct SampleRec {
  double margin = 0.0;      // allowance - value; pass iff >= 0
  double normalized = 0.0;  // residual / (1 + ||reference||), residual checks only
  double lhs = 0.0;
  double rhs = 0.0;
  bool vacuous = false;
};

struct FoldOutcome {
  bool any = false;
  std::size_t worst = 0;
  double margin = std::numeric_limits<double>::infinity();
  double worst_normalized = 0.0;
  long evaluated = 0;
  long vacuous = 0;
};

/// Sequential fold; ties on margin keep the earliest canonical index, so the
/// outcome does not depend on how the records were produced.
inline FoldOutcome fold_samples(const std::vector<SampleRec>& recs) {
  FoldOutcome o;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const SampleRec& r = recs[i];
    if (r.vacuous) {
      ++o.vacuous;
      continue;
    }
    ++o.evaluated;
    if (!o.any || r.margin < o.margin) {
      o.any = true;
      o.margin = r.margin;
      o.worst = i;
    }
    if (r.normalized > o.worst_normalized) o.worst_normalized = r.normalized;
  }
  return o;
}

using WitnessFn = std::function<Witness(std::size_t, const SampleRec&)>;

inline ConditionResult make_condition(const std::string& id, const std::vector<SampleRec>& recs,
                                      const WitnessFn& witness_of, bool residual_style,
                                      const std::string& note = "") {
  const FoldOutcome o = fold_samples(recs);
  ConditionResult c;
  c.id = id;
  c.samples = o.evaluated;
  c.vacuous = o.vacuous;
  c.note = note;
  if (o.any) {
    c.margin = o.margin;
    c.passed = o.margin >= 0.0;
    c.witness = witness_of(o.worst, recs[o.worst]);
    if (residual_style) c.worst_residual = o.worst_normalized;
  } else {
    c.passed = true;
    c.note = note.empty() ? "vacuous" : note + "; vacuous";
  }
  return c;
}

}  // namespace uet::detail

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "uet/constants.hpp"
#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/projection.hpp"
#include "uet/report.hpp"
#include "uet/sampling.hpp"
#include "uet/sweep.hpp"

namespace uet {

inline constexpr double kDefaultVerifyTol = 1e-9;

namespace detail {

/// One exponential inequality sampled over all triples and vectors:
///   e^{lhs_rate (t-s)} ||E(T_l, t0) P(t0) x||  <=  K e^{rhs_rate (t-s)} ||E(T_r, t0) P(t0) x||
/// where T_l is t or s and T_r the other one. A sample passes when
/// lhs <= rhs (1 + tol); it is vacuous when both restricted norms sit at the
/// zero floor. A zero right side with a nonzero left side fails outright.
struct RateCondition {
  std::string id;
  ProjectionFamily proj;
  bool lhs_at_t = true;
  double lhs_rate = 0.0;
  double rhs_rate = 0.0;
  double K = 1.0;
  std::string note;
};

inline ComplianceReport run_rate_conditions(const EvolutionOperator& op,
                                            const std::vector<RateCondition>& conditions,
                                            NormKind nk, const SampleGrid& grid, double tol,
                                            int threads) {
  const auto triples = grid.triples();
  const auto vecs = grid.vectors(op.dimension);
  const std::size_t nv = vecs.size();

  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;

  for (const RateCondition& cond : conditions) {
    auto recs = map_indexed<SampleRec>(triples.size() * nv, threads, [&](std::size_t idx) {
      const TimeTriple& tr = triples[idx / nv];
      const Vec& x = vecs[idx % nv].v;
      SampleRec rec;
      const Vec projected = cond.proj.apply(tr.t0, x);
      const double at_t = floored_norm(nk, evaluate(op, {tr.t, tr.t0}, projected));
      const double at_s = floored_norm(nk, evaluate(op, {tr.s, tr.t0}, projected));
      const double lhs_n = cond.lhs_at_t ? at_t : at_s;
      const double rhs_n = cond.lhs_at_t ? at_s : at_t;
      if (lhs_n == 0.0 && rhs_n == 0.0) {
        rec.vacuous = true;
        return rec;
      }
      const double d = tr.t - tr.s;
      rec.lhs = std::exp(cond.lhs_rate * d) * lhs_n;
      rec.rhs = cond.K * std::exp(cond.rhs_rate * d) * rhs_n;
      rec.margin = rec.rhs * (1.0 + tol) - rec.lhs;
      return rec;
    });
    report.entries.push_back(make_condition(cond.id, recs,
                                            [&](std::size_t idx, const SampleRec& rec) {
                                              Witness w;
                                              w.when = triples[idx / nv];
                                              w.vector_id = vecs[idx % nv].id;
                                              w.lhs = rec.lhs;
                                              w.rhs = rec.rhs;
                                              return w;
                                            },
                                            /*residual_style=*/false, cond.note));
  }
  return report;
}

inline void require_compat(const ComplianceReport& compat, const std::string& what) {
  if (compat.passed()) return;
  const ConditionResult* bad = compat.first_failure();
  std::string msg = what + ": condition " + bad->id + " failed";
  if (bad->witness) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), " at (t=%g, s=%g, t0=%g), vector %s, lhs=%.6g, rhs=%.6g",
                  bad->witness->when.t, bad->witness->when.s, bad->witness->when.t0,
                  bad->witness->vector_id.c_str(), bad->witness->lhs, bad->witness->rhs);
    msg += buf;
  }
  throw IncompatibleError(msg);
}

inline const char* kGrowthReadingNote =
    "right side read with the test vector applied: K * ||E(t,t0) x_proj||";

}  // namespace detail

/// The four inequalities of the three-family system. Refuses incompatible
/// families (run check_compat3 yourself for the full report).
inline ComplianceReport verify_trichotomy(const EvolutionOperator& op, const FamilyTriple& fam,
                                          const TrichotomyConstants& c, NormKind nk,
                                          const SampleGrid& grid, double tol = kDefaultVerifyTol,
                                          int threads = 1) {
  c.validate();
  detail::require_compat(check_compat3(fam, op, nk, grid, tol, threads), "three-family compatibility");
  std::vector<detail::RateCondition> conds;
  conds.push_back({"t1", fam.stable, /*lhs_at_t=*/true, c.nu1, 0.0, c.N1, ""});
  conds.push_back({"t2", fam.unstable, /*lhs_at_t=*/false, c.nu2, 0.0, c.N2, detail::kGrowthReadingNote});
  conds.push_back({"t3", fam.center, /*lhs_at_t=*/false, 0.0, c.nu0, c.N0, ""});
  conds.push_back({"t4", fam.center, /*lhs_at_t=*/true, 0.0, c.nu0, c.N0, ""});
  return detail::run_rate_conditions(op, conds, nk, grid, tol, threads);
}

/// The four inequalities of the two-family system, with complements realized
/// pointwise.
inline ComplianceReport verify_pair_conditions(const EvolutionOperator& op, const FamilyPair& fam,
                                               const NormalizedConstants& c, NormKind nk,
                                               const SampleGrid& grid,
                                               double tol = kDefaultVerifyTol, int threads = 1) {
  c.validate();
  detail::require_compat(check_compat2(fam, op, nk, grid, tol, threads), "two-family compatibility");
  std::vector<detail::RateCondition> conds;
  conds.push_back({"t1'", fam.stable, /*lhs_at_t=*/true, c.nu, 0.0, c.N, ""});
  conds.push_back({"t2'", fam.unstable, /*lhs_at_t=*/false, c.nu, 0.0, c.N, detail::kGrowthReadingNote});
  conds.push_back({"t3'", complement(fam.stable), /*lhs_at_t=*/false, 0.0, c.nu0, c.N, ""});
  conds.push_back({"t4'", complement(fam.unstable), /*lhs_at_t=*/true, 0.0, c.nu0, c.N, ""});
  return detail::run_rate_conditions(op, conds, nk, grid, tol, threads);
}

/// The four inequalities of the four-family system.
inline ComplianceReport verify_quad_conditions(const EvolutionOperator& op, const FamilyQuad& fam,
                                               const NormalizedConstants& c, NormKind nk,
                                               const SampleGrid& grid,
                                               double tol = kDefaultVerifyTol, int threads = 1) {
  c.validate();
  detail::require_compat(check_compat4(fam, op, nk, grid, tol, threads), "four-family compatibility");
  std::vector<detail::RateCondition> conds;
  conds.push_back({"t1''", fam.stable, /*lhs_at_t=*/true, c.nu, 0.0, c.N, ""});
  conds.push_back({"t2''", fam.unstable, /*lhs_at_t=*/false, c.nu, 0.0, c.N, detail::kGrowthReadingNote});
  conds.push_back({"t3''", fam.co_stable, /*lhs_at_t=*/false, 0.0, c.nu0, c.N, ""});
  conds.push_back({"t4''", fam.co_unstable, /*lhs_at_t=*/true, 0.0, c.nu0, c.N, ""});
  return detail::run_rate_conditions(op, conds, nk, grid, tol, threads);
}

}  // namespace uet

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uet/constants.hpp"
#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/projection.hpp"
#include "uet/report.hpp"
#include "uet/sampling.hpp"

namespace uet {

inline constexpr double kDefaultCeiling = 1e6;
inline constexpr double kMinCertifiedN = 1.0 + 1e-12;

/// Which inequality shape the envelope serves:
///  decay        — e^{nu d} ||E_P(t)|| <= N ||E_P(s)||
///  growth       — e^{nu d} ||E_P(s)|| <= N ||E_P(t)||
///  center-upper — ||E_P(t)|| <= N e^{nu0 d} ||E_P(s)||
///  center-lower — ||E_P(s)|| <= N e^{nu0 d} ||E_P(t)||
enum class Direction { Decay, Growth, CenterUpper, CenterLower };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::Decay: return "decay";
    case Direction::Growth: return "growth";
    case Direction::CenterUpper: return "center-upper";
    case Direction::CenterLower: return "center-lower";
  }
  return "decay";
}

inline const char* direction_condition_id(Direction d) {
  switch (d) {
    case Direction::Decay: return "t1";
    case Direction::Growth: return "t2";
    case Direction::CenterUpper: return "t4";
    case Direction::CenterLower: return "t3";
  }
  return "t1";
}

struct ParetoPoint {
  double nu = 0.0;
  double logN = 0.0;
  Witness witness;  // lhs/rhs hold the two restricted norms
};

/// Minimal feasible log-multiplier as a function of the demanded rate, over a
/// fixed sample grid. Every point certifies its inequality on that grid with
/// zero slack at the active witness.
struct ParetoCurve {
  std::string condition_id;
  Direction direction = Direction::Decay;
  bool vacuous = false;  // no effective samples: nothing constrains the constant
  std::vector<ParetoPoint> points;
  std::optional<Witness> unbounded_witness;  // a sample no finite N satisfies
  long samples = 0;
  long vacuous_samples = 0;
  long trivial_samples = 0;  // left side vanished, satisfied for every N
  std::string error;         // set when the restriction itself was refused
};

namespace detail {

struct EnvelopeSample {
  std::uint8_t tag = 1;  // 0 constraint, 1 vacuous, 2 trivial, 3 unbounded
  double d = 0.0;
  double a = 0.0;  // log(lhs norm) - log(rhs norm)
  double lhs_n = 0.0;
  double rhs_n = 0.0;
};

struct EnvelopeData {
  std::vector<EnvelopeSample> recs;
  long constraints = 0;
  long vacuous = 0;
  long trivial = 0;
  std::optional<std::size_t> unbounded_index;
};

inline bool lhs_side_is_t(Direction dir) {
  return dir == Direction::Decay || dir == Direction::CenterUpper;
}

/// Rate sign in the constraint logN >= a + sign * nu * d.
inline double rate_sign(Direction dir) {
  return (dir == Direction::Decay || dir == Direction::Growth) ? 1.0 : -1.0;
}

inline EnvelopeData collect_envelope_samples(const EvolutionOperator& restricted, Direction dir,
                                             NormKind nk, const SampleGrid& grid, int threads) {
  const auto triples = grid.triples();
  const auto vecs = grid.vectors(restricted.dimension);
  const std::size_t nv = vecs.size();
  EnvelopeData data;
  data.recs = map_indexed<EnvelopeSample>(triples.size() * nv, threads, [&](std::size_t idx) {
    const TimeTriple& tr = triples[idx / nv];
    const Vec& x = vecs[idx % nv].v;
    EnvelopeSample rec;
    const double at_t = floored_norm(nk, evaluate(restricted, {tr.t, tr.t0}, x));
    const double at_s = floored_norm(nk, evaluate(restricted, {tr.s, tr.t0}, x));
    const double lhs_n = lhs_side_is_t(dir) ? at_t : at_s;
    const double rhs_n = lhs_side_is_t(dir) ? at_s : at_t;
    rec.lhs_n = lhs_n;
    rec.rhs_n = rhs_n;
    if (lhs_n == 0.0 && rhs_n == 0.0) {
      rec.tag = 1;
    } else if (rhs_n == 0.0) {
      rec.tag = 3;
    } else if (lhs_n == 0.0) {
      rec.tag = 2;
    } else {
      rec.tag = 0;
      rec.d = tr.t - tr.s;
      rec.a = std::log(lhs_n) - std::log(rhs_n);
    }
    return rec;
  });
  for (std::size_t i = 0; i < data.recs.size(); ++i) {
    switch (data.recs[i].tag) {
      case 0: ++data.constraints; break;
      case 1: ++data.vacuous; break;
      case 2: ++data.trivial; break;
      case 3:
        if (!data.unbounded_index) data.unbounded_index = i;
        break;
    }
  }
  return data;
}

inline Witness envelope_witness(const SampleGrid& grid, const EvolutionOperator& restricted,
                                std::size_t idx, const EnvelopeSample& rec) {
  const auto triples = grid.triples();
  const std::size_t nv = grid.vectors(restricted.dimension).size();
  Witness w;
  w.when = triples[idx / nv];
  w.vector_id = grid.vectors(restricted.dimension)[idx % nv].id;
  w.lhs = rec.lhs_n;
  w.rhs = rec.rhs_n;
  return w;
}

/// max over constraints of (a + sign * nu * d); first index wins ties.
inline std::pair<double, std::size_t> envelope_max(const std::vector<EnvelopeSample>& recs,
                                                   double sign, double nu) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].tag != 0) continue;
    const double v = recs[i].a + sign * nu * recs[i].d;
    if (v > best) {
      best = v;
      best_idx = i;
    }
  }
  return {best, best_idx};
}

}  // namespace detail

/// Fits logN(nu) = max over effective samples of (a +/- nu d) for the given
/// direction, where a is the log-ratio of the restricted norms and d = t - s.
/// Requires the restriction to be well defined (commutation holds on the
/// grid).
inline ParetoCurve estimate_envelope(const EvolutionOperator& op, const ProjectionFamily& proj,
                                     Direction dir, NormKind nk, const SampleGrid& grid,
                                     const std::vector<double>& nu_grid,
                                     double tol = kDefaultCheckTol, int threads = 1) {
  const EvolutionOperator restricted = restrict_operator(op, proj, nk, grid, tol, threads);
  const detail::EnvelopeData data = detail::collect_envelope_samples(restricted, dir, nk, grid, threads);

  ParetoCurve curve;
  curve.condition_id = direction_condition_id(dir);
  curve.direction = dir;
  curve.samples = data.constraints;
  curve.vacuous_samples = data.vacuous;
  curve.trivial_samples = data.trivial;
  if (data.unbounded_index) {
    curve.unbounded_witness =
        detail::envelope_witness(grid, restricted, *data.unbounded_index, data.recs[*data.unbounded_index]);
    return curve;
  }
  if (data.constraints == 0) {
    curve.vacuous = true;
    return curve;
  }
  const double sign = detail::rate_sign(dir);
  for (double nu : nu_grid) {
    auto [logN, idx] = detail::envelope_max(data.recs, sign, nu);
    ParetoPoint pt;
    pt.nu = nu;
    pt.logN = logN;
    pt.witness = detail::envelope_witness(grid, restricted, idx, data.recs[idx]);
    curve.points.push_back(std::move(pt));
  }
  return curve;
}

/// Default demanded-rate grid: 33 logarithmically spaced rates in [1e-3, 8].
inline std::vector<double> default_nu_grid() {
  std::vector<double> nus;
  const double lo = std::log(1e-3), hi = std::log(8.0);
  const int count = 33;
  for (int k = 0; k < count; ++k)
    nus.push_back(std::exp(lo + (hi - lo) * static_cast<double>(k) / (count - 1)));
  return nus;
}

enum class ClassifyVerdict { TrichotomicEvidence, DichotomicEvidence, NoEvidence, Vacuous };

inline const char* to_string(ClassifyVerdict v) {
  switch (v) {
    case ClassifyVerdict::TrichotomicEvidence: return "trichotomic-evidence";
    case ClassifyVerdict::DichotomicEvidence: return "dichotomic-evidence";
    case ClassifyVerdict::NoEvidence: return "no-evidence";
    case ClassifyVerdict::Vacuous: return "vacuous";
  }
  return "no-evidence";
}

/// Grid-supported classification of a scenario. The verdict is evidence over
/// the sample grid, never a proof.
struct Classification {
  ClassifyVerdict verdict = ClassifyVerdict::NoEvidence;
  std::optional<NormalizedConstants> constants;
  std::optional<Witness> witness;  // blocking sample for no-evidence
  std::string note;
  std::vector<ParetoCurve> curves;  // decay, growth, center-upper, center-lower
  ComplianceReport compat;
};

namespace detail {

inline bool family_vanishes(const ProjectionFamily& p, const std::vector<double>& times,
                            const std::vector<LabeledVec>& vecs) {
  for (double tau : times)
    for (const auto& lv : vecs)
      if (norm(NormKind::L2, p.apply(tau, lv.v)) > kZeroNormFloor) return false;
  return true;
}

struct JointEnvelope {
  // Constraints in the form logN >= a + sign * nu * d, merged across curves.
  std::vector<EnvelopeSample> recs;
  std::vector<std::size_t> source;  // index into the merged witness table
  double sign = 1.0;
};

}  // namespace detail

/// Estimates all four directional envelopes and derives the best
/// grid-supported constants, or explains why none exist. Families that fail
/// the three-family compatibility check yield no-evidence; families that are
/// all zero on the grid yield a vacuous verdict.
inline Classification classify(const EvolutionOperator& op, const FamilyTriple& fam, NormKind nk,
                               const SampleGrid& grid,
                               const std::vector<double>& nu_grid = default_nu_grid(),
                               double ceiling = kDefaultCeiling, double tol = kDefaultCheckTol,
                               int threads = 1) {
  Classification result;
  const auto times = grid.times();
  const auto vecs = grid.vectors(op.dimension);

  struct DirSpec {
    const ProjectionFamily* proj;
    Direction dir;
  };
  const DirSpec specs[4] = {{&fam.stable, Direction::Decay},
                            {&fam.unstable, Direction::Growth},
                            {&fam.center, Direction::CenterUpper},
                            {&fam.center, Direction::CenterLower}};

  std::vector<detail::EnvelopeData> env_data(4);
  std::vector<EvolutionOperator> restricted(4);
  for (int k = 0; k < 4; ++k) {
    ParetoCurve curve;
    curve.condition_id = direction_condition_id(specs[k].dir);
    curve.direction = specs[k].dir;
    try {
      curve = estimate_envelope(op, *specs[k].proj, specs[k].dir, nk, grid, nu_grid, tol, threads);
      restricted[k] = restrict_operator(op, *specs[k].proj, nk, grid, tol, threads);
      env_data[k] = detail::collect_envelope_samples(restricted[k], specs[k].dir, nk, grid, threads);
    } catch (const IncompatibleError& e) {
      curve.error = e.what();
    }
    result.curves.push_back(std::move(curve));
  }

  const bool all_zero = detail::family_vanishes(fam.center, times, vecs) &&
                        detail::family_vanishes(fam.stable, times, vecs) &&
                        detail::family_vanishes(fam.unstable, times, vecs);
  if (all_zero) {
    result.verdict = ClassifyVerdict::Vacuous;
    result.note = "all three families vanish on the sample grid";
    return result;
  }

  result.compat = check_compat3(fam, op, nk, grid, tol, threads);
  if (!result.compat.passed()) {
    result.verdict = ClassifyVerdict::NoEvidence;
    const ConditionResult* bad = result.compat.first_failure();
    result.note = "families are not compatible with the operator (condition " + bad->id + ")";
    result.witness = bad->witness;
    return result;
  }
  for (const ParetoCurve& c : result.curves) {
    if (!c.error.empty()) {
      result.verdict = ClassifyVerdict::NoEvidence;
      result.note = "restriction refused: " + c.error;
      return result;
    }
    if (c.unbounded_witness) {
      result.verdict = ClassifyVerdict::NoEvidence;
      result.note = "a sample admits no finite multiplier (direction " + std::string(to_string(c.direction)) + ")";
      result.witness = c.unbounded_witness;
      return result;
    }
  }

  const double log_ceiling = std::log(ceiling);

  // Stable/unstable constraints share the demanded rate nu; the center pair
  // shares nu0. For each group: probe the most favorable grid rate, check the
  // ceiling, then refine the boundary rate from the active constraints.
  auto merged = [&](int i, int j, double sign, double probe_nu,
                    double& logN_at_probe, int& which, std::size_t& witness_idx) {
    logN_at_probe = -std::numeric_limits<double>::infinity();
    which = -1;
    for (int k : {i, j}) {
      if (k < 0) continue;
      auto [v, idx] = detail::envelope_max(env_data[k].recs, sign, probe_nu);
      if (env_data[k].constraints > 0 && v > logN_at_probe) {
        logN_at_probe = v;
        which = k;
        witness_idx = idx;
      }
    }
  };

  // Group 1: decay (index 0) + growth (index 1), rate sign +1, probe at the
  // smallest rate (envelope is nondecreasing in nu).
  double logN_su = -std::numeric_limits<double>::infinity();
  int su_which = -1;
  std::size_t su_idx = 0;
  merged(0, 1, +1.0, nu_grid.front(), logN_su, su_which, su_idx);

  double nu_star = nu_grid.back();
  double logN_su_star = 0.0;
  if (su_which >= 0) {
    if (logN_su > log_ceiling) {
      result.verdict = ClassifyVerdict::NoEvidence;
      result.note = "stable/unstable multiplier exceeds the ceiling at every grid rate";
      result.witness = detail::envelope_witness(grid, restricted[su_which], su_idx,
                                                env_data[su_which].recs[su_idx]);
      return result;
    }
    // Largest rate that still attains the minimal multiplier:
    // nu* = min over constraints with d > 0 of (L - a) / d.
    double bound = nu_grid.back();
    for (int k : {0, 1})
      for (const auto& rec : env_data[k].recs) {
        if (rec.tag != 0 || rec.d <= 0.0) continue;
        bound = std::min(bound, (logN_su - rec.a) / rec.d);
      }
    nu_star = std::max(nu_grid.front(), std::min(bound, nu_grid.back()));
    double tmp;
    int w;
    std::size_t wi;
    merged(0, 1, +1.0, nu_star, tmp, w, wi);
    logN_su_star = tmp;
  }

  // Group 2: the center pair, rate sign -1, probe at the largest rate
  // (envelope is nonincreasing in nu0).
  double logN_c = -std::numeric_limits<double>::infinity();
  int c_which = -1;
  std::size_t c_idx = 0;
  merged(2, 3, -1.0, nu_grid.back(), logN_c, c_which, c_idx);

  double nu0_star = nu_grid.front();
  double logN_c_star = 0.0;
  if (c_which >= 0) {
    if (logN_c > log_ceiling) {
      result.verdict = ClassifyVerdict::NoEvidence;
      result.note = "center multiplier exceeds the ceiling at every grid rate";
      result.witness = detail::envelope_witness(grid, restricted[c_which], c_idx,
                                                env_data[c_which].recs[c_idx]);
      return result;
    }
    // Smallest rate attaining the minimal multiplier:
    // nu0* = max over constraints with d > 0 of (a - L) / d.
    double bound = nu_grid.front();
    for (int k : {2, 3})
      for (const auto& rec : env_data[k].recs) {
        if (rec.tag != 0 || rec.d <= 0.0) continue;
        bound = std::max(bound, (rec.a - logN_c) / rec.d);
      }
    nu0_star = std::max(nu_grid.front(), std::min(bound, nu_grid.back()));
    double tmp;
    int w;
    std::size_t wi;
    merged(2, 3, -1.0, nu0_star, tmp, w, wi);
    logN_c_star = tmp;
  }

  NormalizedConstants best;
  best.N = std::max(kMinCertifiedN, std::exp(std::max(logN_su_star, logN_c_star)));
  best.nu = nu_star;
  best.nu0 = nu0_star;
  result.constants = best;

  const bool center_zero = detail::family_vanishes(fam.center, times, vecs);
  if (center_zero) {
    result.verdict = ClassifyVerdict::DichotomicEvidence;
    result.note = "center family vanishes on the sample grid";
  } else {
    result.verdict = ClassifyVerdict::TrichotomicEvidence;
  }
  return result;
}

}  // namespace uet

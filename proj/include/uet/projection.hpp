#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/linalg.hpp"
#include "uet/parallel.hpp"
#include "uet/report.hpp"
#include "uet/sampling.hpp"
#include "uet/sweep.hpp"

namespace uet {

enum class ProjectionKind { Zero, Identity, Coordinate, Matrix, User, Composite };

inline const char* to_string(ProjectionKind k) {
  switch (k) {
    case ProjectionKind::Zero: return "zero";
    case ProjectionKind::Identity: return "identity";
    case ProjectionKind::Coordinate: return "coordinate";
    case ProjectionKind::Matrix: return "matrix";
    case ProjectionKind::User: return "user";
    case ProjectionKind::Composite: return "composite";
  }
  return "user";
}

/// Time-indexed family of idempotent self-maps P(t). Catalog kinds are
/// constant in t; user families may vary. Idempotency is checked on grids,
/// never assumed.
struct ProjectionFamily {
  std::string label;
  ProjectionKind kind = ProjectionKind::Zero;
  std::size_t dimension = 0;
  std::vector<std::size_t> coords;  // Coordinate kind: kept axes, 0-based, sorted
  std::optional<Matrix> mat;
  std::function<Vec(double, const Vec&)> fn;  // User / Composite kinds
  bool linear = true;

  Vec apply(double t, const Vec& x) const {
    if (x.size() != dimension)
      throw DimensionError("projection '" + label + "' expects dimension " +
                           std::to_string(dimension) + ", got " + std::to_string(x.size()));
    switch (kind) {
      case ProjectionKind::Zero: return Vec(dimension, 0.0);
      case ProjectionKind::Identity: return x;
      case ProjectionKind::Coordinate: {
        Vec y(dimension, 0.0);
        for (std::size_t i : coords) y[i] = x[i];
        return y;
      }
      case ProjectionKind::Matrix: return mat->apply(x);
      case ProjectionKind::User:
      case ProjectionKind::Composite: return fn(t, x);
    }
    return x;
  }
};

inline ProjectionFamily zero_family(std::size_t n) {
  ProjectionFamily p;
  p.label = "zero";
  p.kind = ProjectionKind::Zero;
  p.dimension = n;
  return p;
}

inline ProjectionFamily identity_family(std::size_t n) {
  ProjectionFamily p;
  p.label = "identity";
  p.kind = ProjectionKind::Identity;
  p.dimension = n;
  return p;
}

/// Projection onto the listed axes (0-based); labels report 1-based axes.
inline ProjectionFamily coordinate_family(std::size_t n, std::vector<std::size_t> axes) {
  std::sort(axes.begin(), axes.end());
  axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
  for (std::size_t i : axes)
    if (i >= n) throw DimensionError("coordinate projection axis out of range");
  if (axes.empty()) return zero_family(n);
  if (axes.size() == n) return identity_family(n);
  ProjectionFamily p;
  p.kind = ProjectionKind::Coordinate;
  p.dimension = n;
  p.coords = std::move(axes);
  std::string label = "coord{";
  for (std::size_t k = 0; k < p.coords.size(); ++k)
    label += (k ? "," : "") + std::to_string(p.coords[k] + 1);
  p.label = label + "}";
  return p;
}

inline ProjectionFamily matrix_family(Matrix m) {
  ProjectionFamily p;
  p.label = "matrix";
  p.kind = ProjectionKind::Matrix;
  p.dimension = m.size();
  p.mat = std::move(m);
  return p;
}

inline ProjectionFamily user_family(const std::string& label,
                                    std::function<Vec(double, const Vec&)> fn, std::size_t n,
                                    bool linear = false) {
  ProjectionFamily p;
  p.label = label;
  p.kind = ProjectionKind::User;
  p.dimension = n;
  p.fn = std::move(fn);
  p.linear = linear;
  return p;
}

// ---------------------------------------------------------------------------
// Pointwise algebra on families. Results materialize to coordinate sets or
// matrices whenever the operands allow it, which keeps catalog constructions
// exact and serializable; otherwise the result is a lazy composite.
// ---------------------------------------------------------------------------

inline std::optional<std::vector<std::size_t>> as_coordinate_set(const ProjectionFamily& p) {
  switch (p.kind) {
    case ProjectionKind::Zero: return std::vector<std::size_t>{};
    case ProjectionKind::Identity: {
      std::vector<std::size_t> all(p.dimension);
      for (std::size_t i = 0; i < p.dimension; ++i) all[i] = i;
      return all;
    }
    case ProjectionKind::Coordinate: return p.coords;
    default: return std::nullopt;
  }
}

inline std::optional<Matrix> as_matrix(const ProjectionFamily& p) {
  if (p.kind == ProjectionKind::Matrix) return p.mat;
  if (auto set = as_coordinate_set(p)) {
    Matrix m(p.dimension);
    for (std::size_t i : *set) m(i, i) = 1.0;
    return m;
  }
  return std::nullopt;
}

namespace detail {

inline ProjectionFamily composite_family(std::string label, std::size_t n,
                                         std::function<Vec(double, const Vec&)> fn, bool linear) {
  ProjectionFamily p;
  p.label = std::move(label);
  p.kind = ProjectionKind::Composite;
  p.dimension = n;
  p.fn = std::move(fn);
  p.linear = linear;
  return p;
}

}  // namespace detail

/// I - P.
inline ProjectionFamily complement(const ProjectionFamily& p) {
  if (auto set = as_coordinate_set(p)) {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < p.dimension; ++i)
      if (std::find(set->begin(), set->end(), i) == set->end()) rest.push_back(i);
    return coordinate_family(p.dimension, std::move(rest));
  }
  if (auto m = as_matrix(p)) return matrix_family(Matrix::identity(p.dimension) - *m);
  return detail::composite_family("(I-" + p.label + ")", p.dimension,
                                  [p](double t, const Vec& x) { return sub(x, p.apply(t, x)); },
                                  p.linear);
}

/// I - a - b, realized pointwise: x - a(t)x - b(t)x.
inline ProjectionFamily complement_sum(const ProjectionFamily& a, const ProjectionFamily& b) {
  const auto sa = as_coordinate_set(a);
  const auto sb = as_coordinate_set(b);
  if (sa && sb) {
    std::vector<std::size_t> joint = *sa;
    joint.insert(joint.end(), sb->begin(), sb->end());
    std::sort(joint.begin(), joint.end());
    const bool disjoint = std::adjacent_find(joint.begin(), joint.end()) == joint.end();
    if (disjoint) {
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < a.dimension; ++i)
        if (std::find(joint.begin(), joint.end(), i) == joint.end()) rest.push_back(i);
      return coordinate_family(a.dimension, std::move(rest));
    }
  }
  const auto ma = as_matrix(a);
  const auto mb = as_matrix(b);
  if (ma && mb) return matrix_family(Matrix::identity(a.dimension) - *ma - *mb);
  return detail::composite_family(
      "(I-" + a.label + "-" + b.label + ")", a.dimension,
      [a, b](double t, const Vec& x) { return sub(sub(x, a.apply(t, x)), b.apply(t, x)); },
      a.linear && b.linear);
}

/// Pointwise composition x -> a(t, b(t, x)).
inline ProjectionFamily compose(const ProjectionFamily& a, const ProjectionFamily& b) {
  const auto sa = as_coordinate_set(a);
  const auto sb = as_coordinate_set(b);
  if (sa && sb) {
    std::vector<std::size_t> common;
    for (std::size_t i : *sa)
      if (std::find(sb->begin(), sb->end(), i) != sb->end()) common.push_back(i);
    return coordinate_family(a.dimension, std::move(common));
  }
  const auto ma = as_matrix(a);
  const auto mb = as_matrix(b);
  if (ma && mb) return matrix_family(*ma * *mb);
  return detail::composite_family(
      "(" + a.label + "*" + b.label + ")", a.dimension,
      [a, b](double t, const Vec& x) { return a.apply(t, b.apply(t, x)); }, a.linear && b.linear);
}

/// Roles follow the decomposition: center (bounded both ways), stable
/// (decaying), unstable (growing).
struct FamilyTriple {
  ProjectionFamily center, stable, unstable;
};

struct FamilyPair {
  ProjectionFamily stable, unstable;
};

/// Four-family system: stable/unstable plus their complements.
struct FamilyQuad {
  ProjectionFamily stable, unstable, co_stable, co_unstable;
};

// ---------------------------------------------------------------------------
// Checkers
// ---------------------------------------------------------------------------

namespace detail {

inline ConditionResult idempotency_condition(const std::string& id, const ProjectionFamily& p,
                                             const std::vector<double>& times,
                                             const std::vector<LabeledVec>& vecs, NormKind nk,
                                             double tol, int threads) {
  const std::size_t nv = vecs.size();
  auto recs = map_indexed<SampleRec>(times.size() * nv, threads, [&](std::size_t idx) {
    const double tau = times[idx / nv];
    const Vec& x = vecs[idx % nv].v;
    SampleRec rec;
    const Vec once = p.apply(tau, x);
    const Vec twice = p.apply(tau, once);
    const double r = norm(nk, sub(twice, once));
    const double ref = 1.0 + norm(nk, once);
    rec.lhs = r;
    rec.rhs = tol * ref;
    rec.margin = rec.rhs - r;
    rec.normalized = r / ref;
    return rec;
  });
  return make_condition(id, recs,
                        [&](std::size_t idx, const SampleRec& rec) {
                          Witness w;
                          const double tau = times[idx / nv];
                          w.when = {tau, tau, tau};
                          w.vector_id = vecs[idx % nv].id;
                          w.lhs = rec.lhs;
                          w.rhs = rec.rhs;
                          return w;
                        },
                        /*residual_style=*/true);
}

/// Commutation residual E(t,t0)P(t0)x vs P(t)E(t,t0)x over sampled pairs.
inline ConditionResult commutation_condition(const std::string& id, const EvolutionOperator& op,
                                             const std::vector<const ProjectionFamily*>& fams,
                                             const std::vector<std::string>& names,
                                             const std::vector<TimePair>& pairs,
                                             const std::vector<LabeledVec>& vecs, NormKind nk,
                                             double tol, int threads) {
  const std::size_t nv = vecs.size();
  const std::size_t nf = fams.size();
  auto recs = map_indexed<SampleRec>(pairs.size() * nv * nf, threads, [&](std::size_t idx) {
    const TimePair& p = pairs[idx / (nv * nf)];
    const Vec& x = vecs[(idx / nf) % nv].v;
    const ProjectionFamily& fam = *fams[idx % nf];
    SampleRec rec;
    const Vec left = evaluate(op, p, fam.apply(p.t0, x));
    const Vec evolved = evaluate(op, p, x);
    const Vec right = fam.apply(p.t, evolved);
    const double r = norm(nk, sub(left, right));
    const double ref = 1.0 + norm(nk, evolved);
    rec.lhs = r;
    rec.rhs = tol * ref;
    rec.margin = rec.rhs - r;
    rec.normalized = r / ref;
    return rec;
  });
  return make_condition(id, recs,
                        [&](std::size_t idx, const SampleRec& rec) {
                          Witness w;
                          const TimePair& p = pairs[idx / (nv * nf)];
                          w.when = {p.t, p.t, p.t0};
                          w.vector_id = vecs[(idx / nf) % nv].id;
                          w.detail = "k=" + names[idx % nf];
                          w.lhs = rec.lhs;
                          w.rhs = rec.rhs;
                          return w;
                        },
                        /*residual_style=*/true);
}

/// |  ||u||^2 - sum of ||parts||^2  | <= tol * (1 + ||x||^2); the witness
/// records the two squared values. Both sides are quadratic in ||x||, hence
/// the quadratic scaling of the allowance.
struct SquaredNormCase {
  std::string detail;
  // Builds (combined vector, parts) for a sample.
  std::function<std::pair<Vec, std::vector<Vec>>(double, const Vec&)> build;
};

inline ConditionResult squared_norm_condition(const std::string& id,
                                              const std::vector<SquaredNormCase>& cases,
                                              const std::vector<double>& times,
                                              const std::vector<LabeledVec>& vecs, NormKind nk,
                                              double tol, int threads) {
  const std::size_t nv = vecs.size();
  const std::size_t nc = cases.size();
  auto recs = map_indexed<SampleRec>(times.size() * nv * nc, threads, [&](std::size_t idx) {
    const double tau = times[idx / (nv * nc)];
    const Vec& x = vecs[(idx / nc) % nv].v;
    const auto& c = cases[idx % nc];
    SampleRec rec;
    auto [combined, parts] = c.build(tau, x);
    const double lhs_n = norm(nk, combined);
    double rhs_sq = 0.0;
    for (const Vec& part : parts) {
      const double pn = norm(nk, part);
      rhs_sq += pn * pn;
    }
    const double lhs_sq = lhs_n * lhs_n;
    const double xn = norm(nk, x);
    const double allowance = tol * (1.0 + xn * xn);
    rec.lhs = lhs_sq;
    rec.rhs = rhs_sq;
    rec.margin = allowance - std::abs(lhs_sq - rhs_sq);
    rec.normalized = std::abs(lhs_sq - rhs_sq) / (1.0 + xn * xn);
    return rec;
  });
  return make_condition(id, recs,
                        [&](std::size_t idx, const SampleRec& rec) {
                          Witness w;
                          const double tau = times[idx / (nv * nc)];
                          w.when = {tau, tau, tau};
                          w.vector_id = vecs[(idx / nc) % nv].id;
                          w.detail = cases[idx % nc].detail;
                          w.lhs = rec.lhs;
                          w.rhs = rec.rhs;
                          return w;
                        },
                        /*residual_style=*/true);
}

/// Pointwise residual ||build(t, x)|| <= tol * (1 + ||x||) over sampled times.
struct PointResidualCase {
  std::string detail;
  std::function<Vec(double, const Vec&)> build;
};

inline ConditionResult point_residual_condition(const std::string& id,
                                                const std::vector<PointResidualCase>& cases,
                                                const std::vector<double>& times,
                                                const std::vector<LabeledVec>& vecs, NormKind nk,
                                                double tol, int threads) {
  const std::size_t nv = vecs.size();
  const std::size_t nc = cases.size();
  auto recs = map_indexed<SampleRec>(times.size() * nv * nc, threads, [&](std::size_t idx) {
    const double tau = times[idx / (nv * nc)];
    const Vec& x = vecs[(idx / nc) % nv].v;
    SampleRec rec;
    const double r = norm(nk, cases[idx % nc].build(tau, x));
    const double ref = 1.0 + norm(nk, x);
    rec.lhs = r;
    rec.rhs = tol * ref;
    rec.margin = rec.rhs - r;
    rec.normalized = r / ref;
    return rec;
  });
  return make_condition(id, recs,
                        [&](std::size_t idx, const SampleRec& rec) {
                          Witness w;
                          const double tau = times[idx / (nv * nc)];
                          w.when = {tau, tau, tau};
                          w.vector_id = vecs[(idx / nc) % nv].id;
                          w.detail = cases[idx % nc].detail;
                          w.lhs = rec.lhs;
                          w.rhs = rec.rhs;
                          return w;
                        },
                        /*residual_style=*/true);
}

}  // namespace detail

/// P(t)P(t)x must equal P(t)x within tol * (1 + ||P(t)x||) at all samples.
inline ComplianceReport check_idempotent(const ProjectionFamily& p, const SampleGrid& grid,
                                         double tol, NormKind nk = NormKind::L2, int threads = 1) {
  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;
  report.entries.push_back(
      detail::idempotency_condition("idempotent", p, grid.times(), grid.vectors(p.dimension), nk, tol, threads));
  return report;
}

/// Three-family compatibility: partition of the identity, pairwise
/// annihilation, pairwise Pythagorean norm split, and commutation with the
/// operator. Idempotency of each family is included in the report.
inline ComplianceReport check_compat3(const FamilyTriple& fam, const EvolutionOperator& op,
                                      NormKind nk, const SampleGrid& grid, double tol,
                                      int threads = 1) {
  const auto times = grid.times();
  const auto vecs = grid.vectors(op.dimension);
  const auto pairs = grid.pairs();

  const std::vector<const ProjectionFamily*> fams{&fam.center, &fam.stable, &fam.unstable};
  const std::vector<std::string> names{"center", "stable", "unstable"};

  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;
  for (std::size_t k = 0; k < 3; ++k)
    report.entries.push_back(
        detail::idempotency_condition("idempotent(" + names[k] + ")", *fams[k], times, vecs, nk, tol, threads));

  // c1: the three projections sum to the identity pointwise.
  report.entries.push_back(detail::point_residual_condition(
      "c1",
      {{"center+stable+unstable",
        [&fam](double t, const Vec& x) {
          return sub(add(add(fam.center.apply(t, x), fam.stable.apply(t, x)), fam.unstable.apply(t, x)), x);
        }}},
      times, vecs, nk, tol, threads));

  // c2: distinct projections annihilate each other (all ordered pairs).
  std::vector<detail::PointResidualCase> annihilation;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const ProjectionFamily* a = fams[i];
      const ProjectionFamily* b = fams[j];
      annihilation.push_back({names[i] + "*" + names[j],
                              [a, b](double t, const Vec& x) { return a->apply(t, b->apply(t, x)); }});
    }
  report.entries.push_back(
      detail::point_residual_condition("c2", annihilation, times, vecs, nk, tol, threads));

  // c3: squared-norm additivity for each unordered pair.
  std::vector<detail::SquaredNormCase> pythagoras;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) {
      const ProjectionFamily* a = fams[i];
      const ProjectionFamily* b = fams[j];
      pythagoras.push_back({names[i] + "+" + names[j],
                            [a, b](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
                              Vec u = a->apply(t, x);
                              Vec v = b->apply(t, x);
                              return {add(u, v), {std::move(u), std::move(v)}};
                            }});
    }
  report.entries.push_back(
      detail::squared_norm_condition("c3", pythagoras, times, vecs, nk, tol, threads));

  // c4: each family commutes with the operator.
  report.entries.push_back(
      detail::commutation_condition("c4", op, fams, names, pairs, vecs, nk, tol, threads));

  return report;
}

/// Two-family compatibility: mutual annihilation, three squared-norm
/// identities, and commutation.
inline ComplianceReport check_compat2(const FamilyPair& fam, const EvolutionOperator& op,
                                      NormKind nk, const SampleGrid& grid, double tol,
                                      int threads = 1) {
  const auto times = grid.times();
  const auto vecs = grid.vectors(op.dimension);
  const auto pairs = grid.pairs();

  const ProjectionFamily& q1 = fam.stable;
  const ProjectionFamily& q2 = fam.unstable;

  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;
  report.entries.push_back(detail::idempotency_condition("idempotent(stable)", q1, times, vecs, nk, tol, threads));
  report.entries.push_back(detail::idempotency_condition("idempotent(unstable)", q2, times, vecs, nk, tol, threads));

  report.entries.push_back(detail::point_residual_condition(
      "c1'",
      {{"stable*unstable", [&](double t, const Vec& x) { return q1.apply(t, q2.apply(t, x)); }},
       {"unstable*stable", [&](double t, const Vec& x) { return q2.apply(t, q1.apply(t, x)); }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c2'",
      {{"stable+unstable",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = q1.apply(t, x);
          Vec v = q2.apply(t, x);
          return {add(u, v), {std::move(u), std::move(v)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c3'",
      {{"I-stable",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = q1.apply(t, x);
          Vec v = q2.apply(t, x);
          Vec rest = sub(sub(x, u), v);
          return {sub(x, u), {std::move(rest), std::move(v)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c4'",
      {{"I-unstable",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = q1.apply(t, x);
          Vec v = q2.apply(t, x);
          Vec rest = sub(sub(x, u), v);
          return {sub(x, v), {std::move(rest), std::move(u)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::commutation_condition(
      "c5'", op, {&q1, &q2}, {"stable", "unstable"}, pairs, vecs, nk, tol, threads));

  return report;
}

/// Four-family compatibility: complements sum to the identity, the stable
/// pair annihilates while the complements commute, squared-norm identities
/// with the composed center R3 R4, and commutation with the operator.
inline ComplianceReport check_compat4(const FamilyQuad& fam, const EvolutionOperator& op,
                                      NormKind nk, const SampleGrid& grid, double tol,
                                      int threads = 1) {
  const auto times = grid.times();
  const auto vecs = grid.vectors(op.dimension);
  const auto pairs = grid.pairs();

  const ProjectionFamily& r1 = fam.stable;
  const ProjectionFamily& r2 = fam.unstable;
  const ProjectionFamily& r3 = fam.co_stable;
  const ProjectionFamily& r4 = fam.co_unstable;

  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;
  const std::vector<const ProjectionFamily*> fams{&r1, &r2, &r3, &r4};
  const std::vector<std::string> names{"stable", "unstable", "co_stable", "co_unstable"};
  for (std::size_t k = 0; k < 4; ++k)
    report.entries.push_back(
        detail::idempotency_condition("idempotent(" + names[k] + ")", *fams[k], times, vecs, nk, tol, threads));

  report.entries.push_back(detail::point_residual_condition(
      "c1''",
      {{"stable+co_stable",
        [&](double t, const Vec& x) { return sub(add(r1.apply(t, x), r3.apply(t, x)), x); }},
       {"unstable+co_unstable",
        [&](double t, const Vec& x) { return sub(add(r2.apply(t, x), r4.apply(t, x)), x); }}},
      times, vecs, nk, tol, threads));

  // First two cases must vanish; the third requires commutation only.
  report.entries.push_back(detail::point_residual_condition(
      "c2''",
      {{"stable*unstable", [&](double t, const Vec& x) { return r1.apply(t, r2.apply(t, x)); }},
       {"unstable*stable", [&](double t, const Vec& x) { return r2.apply(t, r1.apply(t, x)); }},
       {"co_stable~co_unstable",
        [&](double t, const Vec& x) {
          return sub(r3.apply(t, r4.apply(t, x)), r4.apply(t, r3.apply(t, x)));
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c3''",
      {{"stable+unstable",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = r1.apply(t, x);
          Vec v = r2.apply(t, x);
          return {add(u, v), {std::move(u), std::move(v)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c4''",
      {{"stable+center",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = r1.apply(t, x);
          Vec c = r3.apply(t, r4.apply(t, x));
          return {add(u, c), {std::move(u), std::move(c)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(detail::squared_norm_condition(
      "c5''",
      {{"unstable+center",
        [&](double t, const Vec& x) -> std::pair<Vec, std::vector<Vec>> {
          Vec u = r2.apply(t, x);
          Vec c = r3.apply(t, r4.apply(t, x));
          return {add(u, c), {std::move(u), std::move(c)}};
        }}},
      times, vecs, nk, tol, threads));

  report.entries.push_back(
      detail::commutation_condition("c6''", op, fams, names, pairs, vecs, nk, tol, threads));

  return report;
}

/// Restriction E_P(t,t0) = E(t,t0) P(t0). Requires commutation between the
/// operator and the family on the grid, since the two equivalent forms of the
/// restriction disagree otherwise; the result is then itself an evolution
/// operator.
inline EvolutionOperator restrict_operator(const EvolutionOperator& op, const ProjectionFamily& p,
                                           NormKind nk, const SampleGrid& grid,
                                           double tol = kDefaultCheckTol, int threads = 1) {
  if (p.dimension != op.dimension)
    throw DimensionError("projection '" + p.label + "' does not match operator dimension");
  ConditionResult commutation = detail::commutation_condition(
      "commutation", op, {&p}, {p.label}, grid.pairs(), grid.vectors(op.dimension), nk, tol, threads);
  if (!commutation.passed) {
    const Witness& w = *commutation.witness;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "restriction refused: commutation residual %.3e exceeds allowance %.3e at (t=%g, t0=%g), vector %s",
                  w.lhs, w.rhs, w.when.t, w.when.t0, w.vector_id.c_str());
    throw IncompatibleError(buf);
  }
  EvolutionOperator out;
  out.label = op.label + "|" + p.label;
  out.kind = OperatorKind::Restricted;
  out.dimension = op.dimension;
  out.linear = op.linear && p.linear;
  out.note = op.note;
  out.map = [op, p](double t, double t0, const Vec& x) {
    return evaluate(op, {t, t0}, p.apply(t0, x));
  };
  return out;
}

}  // namespace uet

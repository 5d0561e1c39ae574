#pragma once

#include <string>
#include <utility>

#include "uet/errors.hpp"
#include "uet/evolution.hpp"
#include "uet/projection.hpp"
#include "uet/report.hpp"
#include "uet/sampling.hpp"
#include "uet/verify.hpp"

namespace uet {

/// Provenance of a family construction, carried into reports so equivalence
/// failures name the construction at fault.
struct TransformRecord {
  std::string construction;
  std::string source;
  std::string target;
  std::string constant_note;
};

struct PairTransform {
  FamilyPair family;
  TransformRecord record;
};

struct TripleTransform {
  FamilyTriple family;
  TransformRecord record;
};

struct QuadTransform {
  FamilyQuad family;
  TransformRecord record;
};

namespace detail {

inline std::string triple_desc(const FamilyTriple& f) {
  return "(" + f.center.label + ", " + f.stable.label + ", " + f.unstable.label + ")";
}

inline std::string pair_desc(const FamilyPair& f) {
  return "(" + f.stable.label + ", " + f.unstable.label + ")";
}

inline std::string quad_desc(const FamilyQuad& f) {
  return "(" + f.stable.label + ", " + f.unstable.label + ", " + f.co_stable.label + ", " +
         f.co_unstable.label + ")";
}

/// Asserts ||a(t)x - b(t)x|| <= tol (1 + ||x||) on every sampled (t, x).
inline void require_pointwise_equal(const ProjectionFamily& a, const ProjectionFamily& b,
                                    const SampleGrid& grid, double tol, const std::string& what) {
  const auto times = grid.times();
  const auto vecs = grid.vectors(a.dimension);
  for (double tau : times)
    for (const auto& lv : vecs) {
      const double r = norm(NormKind::L2, sub(a.apply(tau, lv.v), b.apply(tau, lv.v)));
      if (r > tol * (1.0 + norm(NormKind::L2, lv.v))) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), " fails at t=%g on vector %s (residual %.3e)", tau,
                      lv.id.c_str(), r);
        throw ConstructionError(what + buf);
      }
    }
}

/// Asserts ||a(t) b(t) x|| <= tol (1 + ||x||) on every sampled (t, x).
inline void require_annihilation(const ProjectionFamily& a, const ProjectionFamily& b,
                                 const SampleGrid& grid, double tol, const std::string& what) {
  const auto times = grid.times();
  const auto vecs = grid.vectors(a.dimension);
  for (double tau : times)
    for (const auto& lv : vecs) {
      const double r = norm(NormKind::L2, a.apply(tau, b.apply(tau, lv.v)));
      if (r > tol * (1.0 + norm(NormKind::L2, lv.v))) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), " fails at t=%g on vector %s (residual %.3e)", tau,
                      lv.id.c_str(), r);
        throw ConstructionError(what + buf);
      }
    }
}

inline const char* kConstantsTransferNote = "constants (N, nu, nu0) transfer unchanged";

}  // namespace detail

/// Triple -> pair: keep the stable and unstable families. Refuses an
/// incompatible source.
inline PairTransform triple_to_pair(const FamilyTriple& fam, const EvolutionOperator& op,
                                    NormKind nk, const SampleGrid& grid,
                                    double tol = kDefaultCheckTol, int threads = 1) {
  detail::require_compat(check_compat3(fam, op, nk, grid, tol, threads),
                         "triple_to_pair source compatibility");
  PairTransform out;
  out.family = FamilyPair{fam.stable, fam.unstable};
  out.record = {"triple_to_pair", detail::triple_desc(fam), detail::pair_desc(out.family),
                detail::kConstantsTransferNote};
  return out;
}

/// Pair -> triple: the center is I - Q1 - Q2 realized pointwise. The product
/// identity center = (I - Q1)(I - Q2) must hold on the grid; it is what
/// transfers the center bounds.
inline TripleTransform pair_to_triple(const FamilyPair& fam, const EvolutionOperator& op,
                                      NormKind nk, const SampleGrid& grid,
                                      double tol = kDefaultCheckTol, int threads = 1) {
  detail::require_compat(check_compat2(fam, op, nk, grid, tol, threads),
                         "pair_to_triple source compatibility");
  TripleTransform out;
  ProjectionFamily center = complement_sum(fam.stable, fam.unstable);
  // Both orderings of the product must agree with the pointwise complement sum.
  detail::require_pointwise_equal(center, compose(complement(fam.stable), complement(fam.unstable)),
                                  grid, tol, "pair_to_triple: center identity (I-Q1)(I-Q2)");
  detail::require_pointwise_equal(center, compose(complement(fam.unstable), complement(fam.stable)),
                                  grid, tol, "pair_to_triple: center identity (I-Q2)(I-Q1)");
  out.family = FamilyTriple{std::move(center), fam.stable, fam.unstable};
  out.record = {"pair_to_triple", detail::pair_desc(fam), detail::triple_desc(out.family),
                detail::kConstantsTransferNote};
  return out;
}

/// Triple -> quad: (P1, P2, I - P1, I - P2). The composed complements must
/// reproduce the center both ways.
inline QuadTransform triple_to_quad(const FamilyTriple& fam, const EvolutionOperator& op,
                                    NormKind nk, const SampleGrid& grid,
                                    double tol = kDefaultCheckTol, int threads = 1) {
  detail::require_compat(check_compat3(fam, op, nk, grid, tol, threads),
                         "triple_to_quad source compatibility");
  QuadTransform out;
  ProjectionFamily r3 = complement(fam.stable);
  ProjectionFamily r4 = complement(fam.unstable);
  detail::require_pointwise_equal(compose(r3, r4), fam.center, grid, tol,
                                  "triple_to_quad: R3 R4 must equal the center");
  detail::require_pointwise_equal(compose(r4, r3), fam.center, grid, tol,
                                  "triple_to_quad: R4 R3 must equal the center");
  out.family = FamilyQuad{fam.stable, fam.unstable, std::move(r3), std::move(r4)};
  out.record = {"triple_to_quad", detail::triple_desc(fam), detail::quad_desc(out.family),
                detail::kConstantsTransferNote};
  return out;
}

/// Quad -> triple: (R3 R4 composed pointwise, R1, R2), with the annihilation
/// identities of the recovered triple checked on the grid.
inline TripleTransform quad_to_triple(const FamilyQuad& fam, const EvolutionOperator& op,
                                      NormKind nk, const SampleGrid& grid,
                                      double tol = kDefaultCheckTol, int threads = 1) {
  detail::require_compat(check_compat4(fam, op, nk, grid, tol, threads),
                         "quad_to_triple source compatibility");
  TripleTransform out;
  ProjectionFamily center = compose(fam.co_stable, fam.co_unstable);
  detail::require_annihilation(center, fam.stable, grid, tol,
                               "quad_to_triple: center must annihilate the stable family");
  detail::require_annihilation(center, fam.unstable, grid, tol,
                               "quad_to_triple: center must annihilate the unstable family");
  detail::require_annihilation(fam.stable, fam.unstable, grid, tol,
                               "quad_to_triple: stable and unstable must annihilate");
  out.family = FamilyTriple{std::move(center), fam.stable, fam.unstable};
  out.record = {"quad_to_triple", detail::quad_desc(fam), detail::triple_desc(out.family),
                detail::kConstantsTransferNote};
  return out;
}

}  // namespace uet

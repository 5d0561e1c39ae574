#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "uet/errors.hpp"
#include "uet/linalg.hpp"
#include "uet/parallel.hpp"
#include "uet/report.hpp"
#include "uet/sampling.hpp"
#include "uet/scalar_function.hpp"
#include "uet/sweep.hpp"

namespace uet {

inline constexpr double kDefaultCheckTol = 1e-9;

enum class OperatorKind { ScalarQuotient, SemigroupInduced, DiagonalIntegrand, UserSupplied, Restricted };

inline const char* to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::ScalarQuotient: return "scalar_quotient";
    case OperatorKind::SemigroupInduced: return "semigroup";
    case OperatorKind::DiagonalIntegrand: return "diagonal_integrand";
    case OperatorKind::UserSupplied: return "user";
    case OperatorKind::Restricted: return "restricted";
  }
  return "user";
}

/// Two-parameter family E(t, t0) of self-maps of R^n with the composition
/// law E(t,s)E(s,t0) = E(t,t0) for t >= s >= t0. Catalog kinds satisfy the
/// law in closed form; user-supplied maps are checked, not assumed.
struct EvolutionOperator {
  std::string label;
  OperatorKind kind = OperatorKind::UserSupplied;
  std::size_t dimension = 1;
  std::function<Vec(double, double, const Vec&)> map;
  bool linear = false;
  std::string note;  // e.g. quadrature fallback in use
};

namespace detail {

inline std::string sample_str(double t, double t0) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(t=%g, t0=%g)", t, t0);
  return buf;
}

}  // namespace detail

/// Applies E(t,t0) to x. Rejects dimension mismatches and non-finite results
/// (the latter signals a pathological user function or time range).
inline Vec evaluate(const EvolutionOperator& op, const TimePair& pair, const Vec& x) {
  if (!pair.valid()) throw Error("invalid time pair " + detail::sample_str(pair.t, pair.t0));
  if (x.size() != op.dimension)
    throw DimensionError("operator '" + op.label + "' expects dimension " +
                         std::to_string(op.dimension) + ", got " + std::to_string(x.size()));
  Vec y = op.map(pair.t, pair.t0, x);
  if (y.size() != op.dimension)
    throw DimensionError("operator '" + op.label + "' returned dimension " + std::to_string(y.size()));
  if (!all_finite(y))
    throw NonFiniteError("operator '" + op.label + "' produced a non-finite value at " +
                         detail::sample_str(pair.t, pair.t0));
  return y;
}

/// E_f(t,t0)x = (f(t)/f(t0)) x, applied coordinatewise. f must not vanish at
/// any sampled time.
inline EvolutionOperator make_scalar_quotient(const ScalarFn& f, std::size_t dim = 1,
                                              const SampleGrid& grid = default_grid()) {
  for (double tau : grid.times()) {
    const double v = f.value(tau);
    if (!std::isfinite(v)) throw ConstructionError("f is not finite at t=" + std::to_string(tau));
    if (std::abs(v) <= kZeroNormFloor) throw ConstructionError("f vanishes at sampled time t=" + std::to_string(tau));
  }
  EvolutionOperator op;
  op.label = "quotient[" + f.label + "]";
  op.kind = OperatorKind::ScalarQuotient;
  op.dimension = dim;
  op.linear = true;
  op.map = [fv = f.value](double t, double t0, const Vec& x) {
    const double ratio = fv(t) / fv(t0);
    return scale(ratio, x);
  };
  return op;
}

/// E(t,s) = S(t-s) for a semigroup S. Refuses construction when S(0) is not
/// the identity or the law S(a+b) = S(a)S(b) fails on sampled offsets.
inline EvolutionOperator make_semigroup_induced(const std::string& label,
                                                std::function<Vec(double, const Vec&)> S,
                                                std::size_t dim,
                                                const SampleGrid& grid = default_grid(),
                                                double tol = kDefaultCheckTol) {
  std::vector<double> offsets = grid.s_offsets;
  offsets.insert(offsets.end(), grid.t_offsets.begin(), grid.t_offsets.end());
  std::sort(offsets.begin(), offsets.end());
  offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

  const auto vecs = grid.vectors(dim);
  for (const auto& lv : vecs) {
    const Vec y = S(0.0, lv.v);
    const double r = norm(NormKind::L2, sub(y, lv.v));
    if (r > tol * (1.0 + norm(NormKind::L2, lv.v)))
      throw ConstructionError("semigroup '" + label + "': S(0) is not the identity on vector " + lv.id);
  }
  for (double a : offsets)
    for (double b : offsets)
      for (const auto& lv : vecs) {
        const Vec direct = S(a + b, lv.v);
        const Vec chained = S(a, S(b, lv.v));
        const double r = norm(NormKind::L2, sub(chained, direct));
        if (r > tol * (1.0 + norm(NormKind::L2, direct))) {
          char buf[128];
          std::snprintf(buf, sizeof(buf), "semigroup law fails at a=%g, b=%g on vector %s (residual %.3e)",
                        a, b, lv.id.c_str(), r);
          throw ConstructionError("semigroup '" + label + "': " + std::string(buf));
        }
      }

  EvolutionOperator op;
  op.label = "semigroup[" + label + "]";
  op.kind = OperatorKind::SemigroupInduced;
  op.dimension = dim;
  op.map = [S = std::move(S)](double t, double t0, const Vec& x) { return S(t - t0, x); };
  return op;
}

/// Per-coordinate exponent rules for diagonal operators:
/// IntegralRate scales by e^{sign * Integral(phi, t0..t)},
/// LinearRate by e^{rate * (t - t0)}.
struct IntegralRate {
  int sign = -1;  // +1 or -1
  RateFn phi;
};

struct LinearRate {
  double rate = 0.0;
};

using ExponentRule = std::variant<IntegralRate, LinearRate>;

namespace detail {

inline void validate_rate_fn(const RateFn& phi, const std::vector<double>& times) {
  if (!(phi.limit > 0.0)) throw ConstructionError("rate function '" + phi.label + "': limit must be > 0");
  double prev = std::numeric_limits<double>::infinity();
  for (double tau : times) {
    const double v = phi.value(tau);
    if (!std::isfinite(v)) throw ConstructionError("rate function '" + phi.label + "' not finite at t=" + std::to_string(tau));
    if (v < phi.limit * (1.0 - 1e-12))
      throw ConstructionError("rate function '" + phi.label + "' drops below its limit at t=" + std::to_string(tau));
    if (v > prev * (1.0 + 1e-12))
      throw ConstructionError("rate function '" + phi.label + "' is not nonincreasing at t=" + std::to_string(tau));
    prev = v;
  }
  if (phi.has_antiderivative()) {
    // Second-order finite-difference check that the antiderivative matches.
    const double h = 1e-5;
    for (double tau : times) {
      double fd;
      if (tau >= h) {
        fd = (phi.antiderivative(tau + h) - phi.antiderivative(tau - h)) / (2.0 * h);
      } else {
        fd = (-3.0 * phi.antiderivative(tau) + 4.0 * phi.antiderivative(tau + h) -
              phi.antiderivative(tau + 2.0 * h)) / (2.0 * h);
      }
      const double v = phi.value(tau);
      if (std::abs(fd - v) > 1e-6 * (1.0 + std::abs(v)))
        throw ConstructionError("antiderivative of '" + phi.label + "' disagrees with the rate at t=" +
                                std::to_string(tau));
    }
  }
}

}  // namespace detail

/// Diagonal operator: coordinate i evolves as e^{rule_i exponent} x_i.
inline EvolutionOperator make_diagonal_integrand(const std::string& label,
                                                 std::vector<ExponentRule> rules,
                                                 const SampleGrid& grid = default_grid()) {
  if (rules.empty()) throw ConstructionError("diagonal operator needs at least one coordinate rule");
  const auto times = grid.times();
  bool quadrature = false;
  for (const auto& rule : rules) {
    if (const auto* ir = std::get_if<IntegralRate>(&rule)) {
      if (ir->sign != 1 && ir->sign != -1) throw ConstructionError("integral rule sign must be +1 or -1");
      detail::validate_rate_fn(ir->phi, times);
      if (!ir->phi.has_antiderivative()) quadrature = true;
    }
  }
  EvolutionOperator op;
  op.label = "diagonal[" + label + "]";
  op.kind = OperatorKind::DiagonalIntegrand;
  op.dimension = rules.size();
  op.linear = true;
  if (quadrature) op.note = "quadrature: composite-simpson step=0.001";
  op.map = [rules = std::move(rules)](double t, double t0, const Vec& x) {
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      double expo = 0.0;
      if (const auto* ir = std::get_if<IntegralRate>(&rules[i]))
        expo = static_cast<double>(ir->sign) * ir->phi.integral(t0, t);
      else
        expo = std::get<LinearRate>(rules[i]).rate * (t - t0);
      y[i] = std::exp(expo) * x[i];
    }
    return y;
  };
  return op;
}

inline EvolutionOperator make_user_supplied(const std::string& label,
                                            std::function<Vec(double, double, const Vec&)> fn,
                                            std::size_t dim, bool linear = false) {
  EvolutionOperator op;
  op.label = "user[" + label + "]";
  op.kind = OperatorKind::UserSupplied;
  op.dimension = dim;
  op.linear = linear;
  op.map = std::move(fn);
  return op;
}

inline double default_check_tol(const EvolutionOperator& op) {
  return op.kind == OperatorKind::UserSupplied ? 1e-6 : kDefaultCheckTol;
}

/// Checks the composition law on every sampled triple and vector:
/// r = ||E(t,s)E(s,t0)x - E(t,t0)x|| must stay within tol * (1 + ||E(t,t0)x||).
/// A second entry checks that E(t,t) is the identity on reachable vectors
/// E(t,t0)x (the s = t case of the law).
inline ComplianceReport check_evolution_property(const EvolutionOperator& op, const SampleGrid& grid,
                                                 double tol, NormKind nk = NormKind::L2,
                                                 int threads = 1) {
  const auto triples = grid.triples();
  const auto vecs = grid.vectors(op.dimension);
  const std::size_t nv = vecs.size();

  ComplianceReport report;
  report.norm = to_string(nk);
  report.tol = tol;

  auto composition = map_indexed<detail::SampleRec>(triples.size() * nv, threads, [&](std::size_t idx) {
    const TimeTriple& tr = triples[idx / nv];
    const Vec& x = vecs[idx % nv].v;
    detail::SampleRec rec;
    const Vec mid = evaluate(op, {tr.s, tr.t0}, x);
    const Vec chained = evaluate(op, {tr.t, tr.s}, mid);
    const Vec direct = evaluate(op, {tr.t, tr.t0}, x);
    const double r = norm(nk, sub(chained, direct));
    const double ref = 1.0 + norm(nk, direct);
    rec.lhs = r;
    rec.rhs = tol * ref;
    rec.margin = rec.rhs - r;
    rec.normalized = r / ref;
    return rec;
  });
  report.entries.push_back(detail::make_condition(
      "composition", composition,
      [&](std::size_t idx, const detail::SampleRec& rec) {
        Witness w;
        w.when = triples[idx / nv];
        w.vector_id = vecs[idx % nv].id;
        w.lhs = rec.lhs;
        w.rhs = rec.rhs;
        return w;
      },
      /*residual_style=*/true, op.note));

  const auto pairs = grid.pairs();
  auto identity = map_indexed<detail::SampleRec>(pairs.size() * nv, threads, [&](std::size_t idx) {
    const TimePair& p = pairs[idx / nv];
    const Vec& x = vecs[idx % nv].v;
    detail::SampleRec rec;
    const Vec reached = evaluate(op, p, x);
    const Vec again = evaluate(op, {p.t, p.t}, reached);
    const double r = norm(nk, sub(again, reached));
    const double ref = 1.0 + norm(nk, reached);
    rec.lhs = r;
    rec.rhs = tol * ref;
    rec.margin = rec.rhs - r;
    rec.normalized = r / ref;
    return rec;
  });
  report.entries.push_back(detail::make_condition(
      "identity_on_range", identity,
      [&](std::size_t idx, const detail::SampleRec& rec) {
        Witness w;
        const TimePair& p = pairs[idx / nv];
        w.when = {p.t, p.t, p.t0};
        w.vector_id = vecs[idx % nv].id;
        w.lhs = rec.lhs;
        w.rhs = rec.rhs;
        return w;
      },
      /*residual_style=*/true));

  return report;
}

}  // namespace uet

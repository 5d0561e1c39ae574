#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uet/errors.hpp"
#include "uet/linalg.hpp"

namespace uet {

/// Norms at or below this are treated as exactly zero: the inequalities are
/// trivially true on a projection kernel and log-ratios are undefined there.
inline constexpr double kZeroNormFloor = 1e-300;

inline constexpr std::uint64_t kDefaultSeed = 42;

struct TimePair {
  double t = 0.0;
  double t0 = 0.0;
  bool valid() const { return t >= t0 && t0 >= 0.0; }
};

/// Ordered times t >= s >= t0 >= 0 at which all inequalities are sampled.
struct TimeTriple {
  double t = 0.0;
  double s = 0.0;
  double t0 = 0.0;
  bool valid() const { return t >= s && s >= t0 && t0 >= 0.0; }
};

struct LabeledVec {
  std::string id;
  Vec v;
};

/// Finite discretization of the quantifier "for all t >= s >= t0 >= 0 and all
/// x": a deterministic set of time triples and test vectors. Every sweep walks
/// the same canonical order, so reports are reproducible.
struct SampleGrid {
  std::vector<double> t0_values{0.0, 1.0, 2.5, 5.0};
  std::vector<double> s_offsets{0.0, 0.25, 1.0, 2.5, 5.0};
  std::vector<double> t_offsets{0.0, 0.25, 1.0, 2.5, 5.0};
  double t_max = 10.0;
  int vector_count = 8;  // pseudo-random unit vectors in addition to the basis
  std::uint64_t seed = kDefaultSeed;
  std::vector<Vec> extra_vectors;  // optional explicit vectors (ids x1, x2, ...)

  /// All (t, s, t0) with s = t0 + ds, t = s + dt and t <= t_max, enumerated
  /// t0-major. The enumeration order is the canonical sample order.
  std::vector<TimeTriple> triples() const {
    std::vector<TimeTriple> out;
    for (double t0 : t0_values)
      for (double ds : s_offsets)
        for (double dt : t_offsets) {
          const double s = t0 + ds;
          const double t = s + dt;
          if (t <= t_max) out.push_back({t, s, t0});
        }
    return out;
  }

  /// Pairs (b, a) with b >= a drawn from the triples: (s,t0), (t,s), (t,t0),
  /// first occurrence wins.
  std::vector<TimePair> pairs() const {
    std::vector<TimePair> out;
    std::set<std::pair<double, double>> seen;
    for (const TimeTriple& tr : triples()) {
      for (const TimePair p : {TimePair{tr.s, tr.t0}, TimePair{tr.t, tr.s}, TimePair{tr.t, tr.t0}}) {
        if (seen.insert({p.t, p.t0}).second) out.push_back(p);
      }
    }
    return out;
  }

  /// Deduplicated ascending list of every sampled time.
  std::vector<double> times() const {
    std::vector<double> out;
    for (const TimeTriple& tr : triples()) {
      out.push_back(tr.t0);
      out.push_back(tr.s);
      out.push_back(tr.t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Standard basis vectors (e1..en), then explicit extras (x1..), then
  /// seeded pseudo-random unit vectors (r1..). The random stream maps raw
  /// mt19937_64 words to [-1,1) directly, so the vectors do not depend on
  /// any library distribution implementation.
  std::vector<LabeledVec> vectors(std::size_t dim) const {
    std::vector<LabeledVec> out;
    for (std::size_t i = 0; i < dim; ++i) {
      Vec e(dim, 0.0);
      e[i] = 1.0;
      out.push_back({"e" + std::to_string(i + 1), std::move(e)});
    }
    for (std::size_t k = 0; k < extra_vectors.size(); ++k) {
      if (extra_vectors[k].size() != dim)
        throw DimensionError("extra vector x" + std::to_string(k + 1) + " has dimension " +
                             std::to_string(extra_vectors[k].size()) + ", expected " + std::to_string(dim));
      out.push_back({"x" + std::to_string(k + 1), extra_vectors[k]});
    }
    std::mt19937_64 rng(seed);
    auto unit_interval = [&rng]() {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
    };
    for (int k = 0; k < vector_count; ++k) {
      Vec v(dim);
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
          v[i] = 2.0 * unit_interval() - 1.0;
          n2 += v[i] * v[i];
        }
      } while (n2 < 1e-12);
      const double inv = 1.0 / std::sqrt(n2);
      for (double& c : v) c *= inv;
      out.push_back({"r" + std::to_string(k + 1), std::move(v)});
    }
    return out;
  }
};

inline SampleGrid default_grid() { return SampleGrid{}; }

namespace detail {

/// Norms at or below the floor evaluate as exactly zero.
inline double floored_norm(NormKind nk, const Vec& v) {
  const double n = norm(nk, v);
  return n <= kZeroNormFloor ? 0.0 : n;
}

}  // namespace detail

}  // namespace uet

#pragma once

#include <algorithm>

#include "uet/errors.hpp"

namespace uet {

/// Per-role constants of the three-family inequality system.
/// Multipliers exceed 1; rates are positive (units 1/time).
struct TrichotomyConstants {
  double N0 = 0, N1 = 0, N2 = 0;
  double nu0 = 0, nu1 = 0, nu2 = 0;

  void validate() const {
    if (!(N0 > 1.0 && N1 > 1.0 && N2 > 1.0))
      throw Error("constants N0, N1, N2 must exceed 1");
    if (!(nu0 > 0.0 && nu1 > 0.0 && nu2 > 0.0))
      throw Error("rates nu0, nu1, nu2 must be positive");
  }
};

/// Single-multiplier form: N = max of the role multipliers, nu = min of the
/// stable/unstable rates, nu0 carried through.
struct NormalizedConstants {
  double N = 0;
  double nu = 0;
  double nu0 = 0;

  void validate() const {
    if (!(N > 1.0)) throw Error("constant N must exceed 1");
    if (!(nu > 0.0 && nu0 > 0.0)) throw Error("rates nu and nu0 must be positive");
  }
};

inline NormalizedConstants normalize_constants(const TrichotomyConstants& c) {
  c.validate();
  NormalizedConstants n;
  n.N = std::max({c.N0, c.N1, c.N2});
  n.nu = std::min(c.nu1, c.nu2);
  n.nu0 = c.nu0;
  return n;
}

inline TrichotomyConstants expand_constants(const NormalizedConstants& n) {
  n.validate();
  return TrichotomyConstants{n.N, n.N, n.N, n.nu0, n.nu, n.nu};
}

}  // namespace uet

#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "uet/errors.hpp"

namespace uet {

/// Plain scalar function of time with a display label.
struct ScalarFn {
  std::string label;
  std::function<double(double)> value;
};

/// Composite Simpson quadrature on [a, b] (a <= b) with a fixed target step.
inline double simpson_integral(const std::function<double(double)>& f, double a, double b,
                               double step = 1e-3) {
  if (b <= a) return 0.0;
  std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / step));
  if (n < 2) n = 2;
  if (n % 2 != 0) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double sum = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) sum += f(a + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Positive nonincreasing rate function with limit l > 0 at infinity.
/// Integrals use the closed-form antiderivative when one is supplied;
/// otherwise a composite-Simpson fallback (step 1e-3), which is noted in
/// reports because its error enters inequality margins.
struct RateFn {
  std::string label;
  std::function<double(double)> value;
  std::function<double(double)> antiderivative;  // may be empty
  double limit = 0.0;

  bool has_antiderivative() const { return static_cast<bool>(antiderivative); }

  double integral(double a, double b) const {
    if (has_antiderivative()) return antiderivative(b) - antiderivative(a);
    return simpson_integral(value, a, b);
  }
};

inline ScalarFn constant_fn(double c) {
  return {"const(" + std::to_string(c) + ")", [c](double) { return c; }};
}

/// f(t) = e^{rate * t}
inline ScalarFn exp_linear_fn(double rate) {
  return {"exp(" + std::to_string(rate) + "*t)", [rate](double t) { return std::exp(rate * t); }};
}

/// f(t) = e^{coeff * t^2}
inline ScalarFn exp_quadratic_fn(double coeff) {
  return {"exp(" + std::to_string(coeff) + "*t^2)",
          [coeff](double t) { return std::exp(coeff * t * t); }};
}

/// phi(t) = limit + amplitude * e^{-decay * t}, antiderivative
/// limit*t - (amplitude/decay) e^{-decay * t}. Nonincreasing with
/// phi(t) -> limit, so it is a valid rate function whenever limit > 0.
inline RateFn offset_exp_decay_rate(double limit, double amplitude, double decay) {
  if (!(limit > 0.0)) throw ConstructionError("rate function limit must be positive");
  if (!(amplitude >= 0.0)) throw ConstructionError("rate function amplitude must be nonnegative");
  if (!(decay > 0.0)) throw ConstructionError("rate function decay must be positive");
  RateFn r;
  r.label = "rate(limit=" + std::to_string(limit) + ")";
  r.value = [limit, amplitude, decay](double t) { return limit + amplitude * std::exp(-decay * t); };
  r.antiderivative = [limit, amplitude, decay](double t) {
    return limit * t - (amplitude / decay) * std::exp(-decay * t);
  };
  r.limit = limit;
  return r;
}

inline RateFn constant_rate(double c) {
  if (!(c > 0.0)) throw ConstructionError("constant rate must be positive");
  RateFn r;
  r.label = "rate(const " + std::to_string(c) + ")";
  r.value = [c](double) { return c; };
  r.antiderivative = [c](double t) { return c * t; };
  r.limit = c;
  return r;
}

}  // namespace uet

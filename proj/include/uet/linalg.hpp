#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "uet/errors.hpp"

namespace uet {

/// State vectors are dense real coordinates; the state space is R^n.
using Vec = std::vector<double>;

enum class NormKind { L1, L2, LInf };

inline const char* to_string(NormKind k) {
  switch (k) {
    case NormKind::L1: return "L1";
    case NormKind::L2: return "L2";
    case NormKind::LInf: return "LInf";
  }
  return "L2";
}

inline NormKind norm_from_string(const std::string& s) {
  if (s == "L1") return NormKind::L1;
  if (s == "L2") return NormKind::L2;
  if (s == "LInf") return NormKind::LInf;
  throw ScenarioError("unknown norm '" + s + "' (expected L1, L2 or LInf)");
}

inline bool all_finite(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

inline double norm(NormKind k, const Vec& x) {
  switch (k) {
    case NormKind::L1: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    case NormKind::L2: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    case NormKind::LInf: {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      return m;
    }
  }
  return 0.0;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(double lambda, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = lambda * a[i];
  return r;
}

/// Dense square matrix, row-major. Just enough algebra for projection
/// families; state spaces here are small.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Vec apply(const Vec& x) const {
    Vec r(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
      r[i] = s;
    }
    return r;
  }

  Matrix operator*(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const double v = a_[i * n_ + k];
        if (v == 0.0) continue;
        for (std::size_t j = 0; j < n_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  Matrix operator+(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
  }

  Matrix operator-(const Matrix& o) const {
    Matrix r(n_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
  }

  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

}  // namespace uet

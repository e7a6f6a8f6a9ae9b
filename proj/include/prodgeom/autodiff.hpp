#pragma once

/**
 * @file autodiff.hpp
 * @brief Forward-mode second-order jets.
 *
 * A Jet2 carries the value, gradient and full Hessian of a scalar function
 * of n inputs. Every operation propagates all three with the exact chain
 * and product rules, so derivatives are correct up to floating-point
 * rounding with no truncation error.
 *
 * The Hessian is stored densely. Each entry (i,j) is produced by the same
 * commutative floating-point expression as entry (j,i), so the matrix stays
 * symmetric bit-for-bit without ever copying one triangle onto the other.
 * The Hessian updates are written as explicit loops because Eigen may fold a
 * scalar factor into one side of an outer product, which breaks that.
 */

#include <cmath>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "prodgeom/errors.hpp"

namespace prodgeom {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct Jet2 {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;

  Jet2() = default;

  Jet2(double v, Vector g, Matrix h) : value(v), gradient(std::move(g)), hessian(std::move(h)) {}

  /// Constant jet in n inputs.
  static Jet2 constant(double v, std::size_t n) {
    const auto m = static_cast<Eigen::Index>(n);
    return {v, Vector::Zero(m), Matrix::Zero(m, m)};
  }

  std::size_t size() const { return static_cast<std::size_t>(gradient.size()); }
};

/// Seed jet for input i at coordinate x: value x, gradient e_i, zero Hessian.
inline Jet2 lift_variable(std::size_t i, double x, std::size_t n) {
  if (i >= n) {
    throw ValidationError("lift_variable: index " + std::to_string(i) + " out of range for " +
                          std::to_string(n) + " inputs");
  }
  Jet2 out = Jet2::constant(x, n);
  out.gradient[static_cast<Eigen::Index>(i)] = 1.0;
  return out;
}

/// Applies a one-variable function with known value and first two
/// derivatives at u.value: grad = d1 g, H = d1 H + d2 g g^T.
inline Jet2 chain(const Jet2& u, double value, double d1, double d2) {
  const Eigen::Index n = u.gradient.size();
  const Vector& g = u.gradient;
  Matrix h(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) h(r, c) = d1 * u.hessian(r, c) + d2 * (g[r] * g[c]);
  return {value, d1 * g, std::move(h)};
}

namespace detail {

inline void require_same_size(const Jet2& a, const Jet2& b) {
  if (a.size() != b.size()) {
    throw ValidationError("jet dimension mismatch: " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
}

inline bool is_integer(double p) { return std::isfinite(p) && p == std::nearbyint(p); }

}  // namespace detail

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
  detail::require_same_size(a, b);
  return {a.value + b.value, a.gradient + b.gradient, a.hessian + b.hessian};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
  detail::require_same_size(a, b);
  return {a.value - b.value, a.gradient - b.gradient, a.hessian - b.hessian};
}

inline Jet2 operator-(const Jet2& a) { return {-a.value, -a.gradient, -a.hessian}; }

inline Jet2 operator+(const Jet2& a, double c) { return {a.value + c, a.gradient, a.hessian}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }

inline Jet2 operator*(const Jet2& a, double c) { return {a.value * c, c * a.gradient, c * a.hessian}; }
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }

// (ab)'' = a H_b + b H_a + g_a g_b^T + g_b g_a^T
inline Jet2 operator*(const Jet2& a, const Jet2& b) {
  detail::require_same_size(a, b);
  const Eigen::Index n = a.gradient.size();
  const Vector& ga = a.gradient;
  const Vector& gb = b.gradient;
  Matrix h(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      h(r, c) = (a.value * b.hessian(r, c) + b.value * a.hessian(r, c)) + (ga[r] * gb[c] + gb[r] * ga[c]);
  return {a.value * b.value, a.value * gb + b.value * ga, std::move(h)};
}

/// Real power x^p. Non-integer exponents require x > 0; negative integer
/// exponents require x != 0.
inline double checked_pow(double x, double p) {
  if (!detail::is_integer(p) && !(x > 0.0)) {
    throw DomainError("fractional power of non-positive argument " + std::to_string(x));
  }
  if (p < 0.0 && x == 0.0) {
    throw DomainError("negative power of zero");
  }
  return std::pow(x, p);
}

inline double checked_log(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log of non-positive argument " + std::to_string(x));
  }
  return std::log(x);
}

inline Jet2 pow(const Jet2& u, double p) {
  const double v = checked_pow(u.value, p);
  if (p == 0.0) {
    return Jet2::constant(1.0, u.size());
  }
  const double d1 = p * checked_pow(u.value, p - 1.0);
  const double d2 = (p == 1.0) ? 0.0 : p * (p - 1.0) * checked_pow(u.value, p - 2.0);
  return chain(u, v, d1, d2);
}

inline Jet2 log(const Jet2& u) {
  const double v = checked_log(u.value);
  const double r = 1.0 / u.value;
  return chain(u, v, r, -r * r);
}

inline Jet2 exp(const Jet2& u) {
  const double e = std::exp(u.value);
  return chain(u, e, e, e);
}

/// Scalar overloads so expression templates can be evaluated on plain
/// doubles with the same domain rules.
inline double pow(double u, double p) { return checked_pow(u, p); }
inline double log(double u) { return checked_log(u); }
inline double exp(double u) { return std::exp(u); }

/// Extracts the value of a jet or passes a double through.
inline double value_of(double x) { return x; }
inline double value_of(const Jet2& j) { return j.value; }

}  // namespace prodgeom

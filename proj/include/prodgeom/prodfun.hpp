#pragma once

/**
 * @file prodfun.hpp
 * @brief Production-function families and their evaluation.
 *
 * A FunctionExpr is an immutable value describing one of
 *
 *   cobb_douglas   gamma * prod x_i^alpha_i
 *   acms           gamma * (sum a_i^rho x_i^rho)^(d/rho)
 *   quasi_sum      F(h_1(x_1) + ... + h_n(x_n))
 *   ratio          F(x_2 / x_1)
 *   composite      F(g(x)) for another FunctionExpr g
 *
 * Evaluation is a template over the scalar type, so the same code path
 * yields plain values (double) and exact second-order jets (Jet2).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "prodgeom/autodiff.hpp"
#include "prodgeom/errors.hpp"
#include "prodgeom/sampling.hpp"
#include "prodgeom/scalar_fn.hpp"

namespace prodgeom {

/// Samples per axis for the monotonicity check of quasi-sum components.
inline constexpr std::size_t kMonotonicitySamples = 64;

struct QuasiSumSpec {
  ScalarFn outer;
  std::vector<ScalarFn> inner;

  std::size_t size() const { return inner.size(); }
};

enum class Family { cobb_douglas, acms, quasi_sum, ratio, composite };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::cobb_douglas: return "cobb_douglas";
    case Family::acms: return "acms";
    case Family::quasi_sum: return "quasi_sum";
    case Family::ratio: return "ratio";
    case Family::composite: return "composite";
  }
  return "?";
}

class FunctionExpr;

struct CobbDouglasParams {
  double gamma;
  std::vector<double> alpha;
};

struct AcmsParams {
  double gamma;
  std::vector<double> a;
  double rho;
  double d;
  std::vector<double> weights;  // a_i^rho
};

struct QuasiSumParams {
  QuasiSumSpec spec;
};

struct RatioParams {
  ScalarFn outer;
};

struct CompositeParams {
  ScalarFn outer;
  std::shared_ptr<const FunctionExpr> inner;
};

namespace detail {

template <class T>
T make_constant(double v, std::size_t n) {
  if constexpr (std::is_same_v<T, Jet2>) {
    return Jet2::constant(v, n);
  } else {
    (void)n;
    return v;
  }
}

}  // namespace detail

class FunctionExpr {
 public:
  using Params = std::variant<CobbDouglasParams, AcmsParams, QuasiSumParams, RatioParams, CompositeParams>;

  FunctionExpr(Params params, std::size_t n) : params_(std::move(params)), n_(n) {}

  Family family() const { return static_cast<Family>(params_.index()); }
  std::size_t input_count() const { return n_; }
  const Params& params() const { return params_; }

  template <class P>
  const P* get_if() const {
    return std::get_if<P>(&params_);
  }

  /// Evaluates at x with scalar type T (double or Jet2). No positivity or
  /// dimension checks; use evaluate / evaluate_jet for those.
  template <class T>
  T evaluate_as(std::span<const T> x) const {
    return std::visit([&](const auto& p) { return eval_family<T>(p, x); }, params_);
  }

 private:
  template <class T>
  T eval_family(const CobbDouglasParams& p, std::span<const T> x) const {
    T acc = detail::make_constant<T>(p.gamma, n_);
    for (std::size_t i = 0; i < n_; ++i) acc = acc * pow(x[i], p.alpha[i]);
    return acc;
  }

  template <class T>
  T eval_family(const AcmsParams& p, std::span<const T> x) const {
    T u = detail::make_constant<T>(0.0, n_);
    for (std::size_t i = 0; i < n_; ++i) u = u + pow(x[i], p.rho) * p.weights[i];
    return pow(u, p.d / p.rho) * p.gamma;
  }

  template <class T>
  T eval_family(const QuasiSumParams& p, std::span<const T> x) const {
    T u = detail::make_constant<T>(0.0, n_);
    for (std::size_t i = 0; i < n_; ++i) u = u + p.spec.inner[i](x[i]);
    return p.spec.outer(u);
  }

  template <class T>
  T eval_family(const RatioParams& p, std::span<const T> x) const {
    return p.outer(x[1] * pow(x[0], -1.0));
  }

  template <class T>
  T eval_family(const CompositeParams& p, std::span<const T> x) const {
    return p.outer(p.inner->template evaluate_as<T>(x));
  }

  Params params_;
  std::size_t n_;
};

/// Throws unless x has the expression's dimension and is strictly positive.
inline void check_point(const FunctionExpr& expr, std::span<const double> x) {
  if (x.size() != expr.input_count()) {
    throw ValidationError("point has " + std::to_string(x.size()) + " coordinates, function takes " +
                          std::to_string(expr.input_count()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      throw ValidationError("point coordinate x" + std::to_string(i + 1) + " is not strictly positive and finite");
    }
  }
}

inline double evaluate(const FunctionExpr& expr, std::span<const double> x) {
  check_point(expr, x);
  return expr.evaluate_as<double>(x);
}

/// Value, gradient and Hessian at x.
inline Jet2 evaluate_jet(const FunctionExpr& expr, std::span<const double> x) {
  check_point(expr, x);
  const std::size_t n = x.size();
  std::vector<Jet2> vars;
  vars.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vars.push_back(lift_variable(i, x[i], n));
  Jet2 out = expr.evaluate_as<Jet2>(std::span<const Jet2>(vars));
  if (!std::isfinite(out.value) || !out.gradient.allFinite() || !out.hessian.allFinite()) {
    throw DomainError("non-finite derivative evaluation");
  }
  return out;
}

// Builders

inline FunctionExpr build_cobb_douglas(double gamma, std::vector<double> alpha) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("cobb_douglas: gamma must be positive");
  if (alpha.empty()) throw ValidationError("cobb_douglas: need at least one exponent");
  for (double a : alpha) {
    if (a == 0.0 || !std::isfinite(a)) throw ValidationError("cobb_douglas: zero exponent");
  }
  const std::size_t n = alpha.size();
  return FunctionExpr(CobbDouglasParams{gamma, std::move(alpha)}, n);
}

inline FunctionExpr build_acms(double gamma, std::vector<double> a, double rho, double d) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ValidationError("acms: gamma must be positive");
  if (rho == 0.0 || !std::isfinite(rho)) throw ValidationError("acms: rho must be nonzero");
  if (d == 0.0 || !std::isfinite(d)) throw ValidationError("acms: degree d must be nonzero");
  if (a.empty()) throw ValidationError("acms: need at least one share parameter");
  std::vector<double> weights;
  for (double ai : a) {
    if (ai == 0.0 || !std::isfinite(ai)) throw ValidationError("acms: zero share parameter");
    const double w = std::pow(ai, rho);
    if (!std::isfinite(w)) throw ValidationError("acms: a_i^rho is undefined for a_i < 0 with fractional rho");
    weights.push_back(w);
  }
  const std::size_t n = a.size();
  return FunctionExpr(AcmsParams{gamma, std::move(a), rho, d, std::move(weights)}, n);
}

/// Builds F(h_1(x_1)+...+h_n(x_n)) after checking, on `domain`, that every
/// h_i is strictly monotone and F is defined and strictly increasing on the
/// range of the inner sum.
inline FunctionExpr build_quasi_sum(QuasiSumSpec spec, const Box& domain) {
  const std::size_t n = spec.size();
  if (n < 2) throw ValidationError("quasi_sum: need at least two inputs");
  domain.validate();
  if (domain.size() != n) throw ValidationError("quasi_sum: domain box dimension does not match input count");

  double u_lo = 0.0;
  double u_hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xs = geometric_axis(domain.lo[i], domain.hi[i], kMonotonicitySamples);
    int sign = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double x : xs) {
      Derivs d{};
      try {
        d = spec.inner[i].derivs(x);
      } catch (const DomainError&) {
        throw ValidationError("quasi_sum: inner function " + std::to_string(i) + " undefined at x = " +
                              std::to_string(x));
      }
      const int s = d.d1 > 0.0 ? 1 : (d.d1 < 0.0 ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign) || !std::isfinite(d.value)) {
        throw ValidationError("quasi_sum: inner function " + std::to_string(i) +
                              " is not strictly monotone at x = " + std::to_string(x));
      }
      sign = s;
      lo = std::min(lo, d.value);
      hi = std::max(hi, d.value);
    }
    u_lo += lo;
    u_hi += hi;
  }

  if (!spec.outer.defined_on(u_lo, u_hi)) {
    throw ValidationError("quasi_sum: outer function undefined on inner-sum range [" + std::to_string(u_lo) +
                          ", " + std::to_string(u_hi) + "]");
  }
  for (std::size_t k = 0; k < kMonotonicitySamples; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(kMonotonicitySamples - 1);
    const double u = u_lo + (u_hi - u_lo) * t;
    if (!(spec.outer.derivs(u).d1 > 0.0)) {
      throw ValidationError("quasi_sum: outer function is not strictly increasing at u = " + std::to_string(u));
    }
  }
  return FunctionExpr(QuasiSumParams{std::move(spec)}, n);
}

/// Monotonicity is checked on the cube [0.5, 2]^n.
inline FunctionExpr build_quasi_sum(QuasiSumSpec spec) {
  const std::size_t n = spec.size();
  return build_quasi_sum(std::move(spec), Box::cube(n, 0.5, 2.0));
}

inline FunctionExpr build_ratio(ScalarFn outer) {
  // x2/x1 ranges over all of (0, inf).
  const auto sign = outer.monotone_sign_on_positive();
  if (!sign || *sign <= 0) throw ValidationError("ratio: outer function must be strictly increasing");
  if (!outer.defined_on(std::numeric_limits<double>::min(), std::numeric_limits<double>::max())) {
    throw ValidationError("ratio: outer function must be defined on the positive half-line");
  }
  return FunctionExpr(RatioParams{std::move(outer)}, 2);
}

inline FunctionExpr build_composite(ScalarFn outer, FunctionExpr inner) {
  const std::size_t n = inner.input_count();
  return FunctionExpr(CompositeParams{std::move(outer), std::make_shared<const FunctionExpr>(std::move(inner))},
                      n);
}

/// Euler quotient (sum x_i f_i) / f; equals d everywhere for a
/// d-homogeneous function.
inline double homogeneity_degree(const FunctionExpr& expr, std::span<const double> x) {
  const Jet2 j = evaluate_jet(expr, x);
  if (j.value == 0.0) throw DomainError("homogeneity_degree: function vanishes at point");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * j.gradient[static_cast<Eigen::Index>(i)];
  return s / j.value;
}

/// Closed-form Hessian determinant of F(h_1(x_1)+...+h_n(x_n)):
///   (F')^n prod h_i'' + (F')^(n-1) F'' sum_j h_j'^2 prod_{i != j} h_i''
inline double hessian_det_quasisum(const QuasiSumSpec& spec, std::span<const double> x) {
  const std::size_t n = spec.size();
  if (x.size() != n) throw ValidationError("hessian_det_quasisum: dimension mismatch");
  std::vector<Derivs> h;
  double u = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0)) throw ValidationError("hessian_det_quasisum: point must be strictly positive");
    h.push_back(spec.inner[i].derivs(x[i]));
    u += h.back().value;
  }
  const Derivs outer = spec.outer.derivs(u);

  double all_second = 1.0;
  for (const auto& hi : h) all_second *= hi.d2;
  double mixed = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double term = h[j].d1 * h[j].d1;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) term *= h[i].d2;
    }
    mixed += term;
  }
  const double fp_n1 = std::pow(outer.d1, static_cast<double>(n - 1));
  return fp_n1 * outer.d1 * all_second + fp_n1 * outer.d2 * mixed;
}

/// Rewrites the closed families as an equivalent quasi-sum when one exists
/// without a monotonicity check:
///   cobb_douglas -> gamma * exp(sum alpha_i ln x_i)
///   acms         -> gamma * u^(d/rho), inner a_i^rho x_i^rho
/// quasi_sum returns its own spec; other families return nullopt.
inline std::optional<QuasiSumSpec> as_quasi_sum(const FunctionExpr& expr) {
  if (const auto* p = expr.get_if<QuasiSumParams>()) return p->spec;
  if (const auto* p = expr.get_if<CobbDouglasParams>()) {
    QuasiSumSpec s{ScalarFn::exp(p->gamma), {}};
    for (double a : p->alpha) s.inner.push_back(ScalarFn::log(a));
    return s;
  }
  if (const auto* p = expr.get_if<AcmsParams>()) {
    QuasiSumSpec s{ScalarFn::power(p->gamma, p->d / p->rho), {}};
    for (double w : p->weights) s.inner.push_back(ScalarFn::power(w, p->rho));
    return s;
  }
  return std::nullopt;
}

}  // namespace prodgeom

#pragma once

/**
 * @file scalar_fn.hpp
 * @brief Closed one-variable function family used for the outer and inner
 * parts of quasi-sum production functions.
 *
 *   power:  c * u^p + s
 *   log:    c * ln(u) + s
 *   exp:    c * e^u + s
 *   affine: c * u + s
 *
 * Each form exposes value, first and second derivative in closed form.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "prodgeom/autodiff.hpp"
#include "prodgeom/errors.hpp"

namespace prodgeom {

enum class ScalarForm { power, log, exp, affine };

inline std::string_view to_string(ScalarForm f) {
  switch (f) {
    case ScalarForm::power: return "power";
    case ScalarForm::log: return "log";
    case ScalarForm::exp: return "exp";
    case ScalarForm::affine: return "affine";
  }
  return "?";
}

inline ScalarForm scalar_form_from_string(std::string_view s) {
  if (s == "power") return ScalarForm::power;
  if (s == "log") return ScalarForm::log;
  if (s == "exp") return ScalarForm::exp;
  if (s == "affine") return ScalarForm::affine;
  throw ValidationError("unknown scalar form '" + std::string(s) + "'");
}

struct Derivs {
  double value;
  double d1;
  double d2;
};

class ScalarFn {
 public:
  static ScalarFn power(double coefficient, double exponent, double shift = 0.0) {
    return ScalarFn(ScalarForm::power, coefficient, exponent, shift);
  }
  static ScalarFn log(double coefficient = 1.0, double shift = 0.0) {
    return ScalarFn(ScalarForm::log, coefficient, 1.0, shift);
  }
  static ScalarFn exp(double coefficient = 1.0, double shift = 0.0) {
    return ScalarFn(ScalarForm::exp, coefficient, 1.0, shift);
  }
  static ScalarFn affine(double coefficient = 1.0, double shift = 0.0) {
    return ScalarFn(ScalarForm::affine, coefficient, 1.0, shift);
  }
  static ScalarFn identity() { return affine(1.0, 0.0); }

  /// Generic constructor; validates coefficient and exponent.
  ScalarFn(ScalarForm form, double coefficient, double exponent, double shift)
      : form_(form), coefficient_(coefficient), exponent_(exponent), shift_(shift) {
    if (!std::isfinite(coefficient) || coefficient == 0.0) {
      throw ValidationError("scalar function: coefficient must be finite and nonzero");
    }
    if (!std::isfinite(shift)) throw ValidationError("scalar function: shift must be finite");
    if (form == ScalarForm::power && (!std::isfinite(exponent) || exponent == 0.0)) {
      throw ValidationError("scalar function: power exponent must be finite and nonzero");
    }
  }

  ScalarForm form() const { return form_; }
  double coefficient() const { return coefficient_; }
  double exponent() const { return exponent_; }
  double shift() const { return shift_; }

  /// Same function with the additive shift removed.
  ScalarFn unshifted() const { return ScalarFn(form_, coefficient_, exponent_, 0.0); }

  Derivs derivs(double u) const {
    const double c = coefficient_;
    switch (form_) {
      case ScalarForm::power: {
        const double p = exponent_;
        const double v = checked_pow(u, p);
        const double d1 = (p == 1.0) ? c : c * p * checked_pow(u, p - 1.0);
        const double d2 = (p == 1.0) ? 0.0 : c * p * (p - 1.0) * checked_pow(u, p - 2.0);
        return {c * v + shift_, d1, d2};
      }
      case ScalarForm::log: {
        const double v = checked_log(u);
        return {c * v + shift_, c / u, -c / (u * u)};
      }
      case ScalarForm::exp: {
        const double e = std::exp(u);
        return {c * e + shift_, c * e, c * e};
      }
      case ScalarForm::affine:
        return {c * u + shift_, c, 0.0};
    }
    return {0.0, 0.0, 0.0};
  }

  double operator()(double u) const { return derivs(u).value; }
  Jet2 operator()(const Jet2& u) const {
    const Derivs d = derivs(u.value);
    return chain(u, d.value, d.d1, d.d2);
  }

  /// True when the function is defined on every u in [lo, hi].
  bool defined_on(double lo, double hi) const {
    switch (form_) {
      case ScalarForm::log: return lo > 0.0;
      case ScalarForm::power:
        if (!detail::is_integer(exponent_)) return lo > 0.0;
        if (exponent_ < 0.0) return lo > 0.0 || hi < 0.0;
        return true;
      default: return true;
    }
  }

  /// Sign of the first derivative when it is the same over every u > 0
  /// (form-level monotonicity on the positive half-line); nullopt otherwise.
  std::optional<int> monotone_sign_on_positive() const {
    const int cs = coefficient_ > 0.0 ? 1 : -1;
    switch (form_) {
      case ScalarForm::power: return exponent_ > 0.0 ? cs : -cs;
      default: return cs;
    }
  }

  bool operator==(const ScalarFn&) const = default;

 private:
  ScalarForm form_;
  double coefficient_;
  double exponent_;
  double shift_;
};

}  // namespace prodgeom

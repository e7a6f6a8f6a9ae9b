#pragma once

/**
 * @file elasticity.hpp
 * @brief Hicks elasticity of substitution and CES detection.
 *
 * For inputs i != j the Hicks elasticity is the quotient
 *
 *            1/(x_i f_i) + 1/(x_j f_j)
 *   H_ij = -------------------------------------------
 *          -f_ii/f_i^2 + 2 f_ij/(f_i f_j) - f_jj/f_j^2
 *
 * A function has the CES property when H_ij is one nonzero constant for all
 * pairs and points. Numerator and denominator are compared against a
 * point-local scale so that functions where both vanish identically (the
 * two-input ratio family F(x_2/x_1)) are reported as degenerate instead of
 * producing 0/0.
 *
 * Indices in this API are zero-based.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prodgeom/autodiff.hpp"
#include "prodgeom/prodfun.hpp"
#include "prodgeom/sampling.hpp"

namespace prodgeom {

inline constexpr double kNumeratorThreshold = 1e-9;
inline constexpr double kDenominatorThreshold = 1e-9;
inline constexpr double kCesTolerance = 1e-6;

enum class HicksKind { finite, infinite, degenerate };

inline std::string_view to_string(HicksKind k) {
  switch (k) {
    case HicksKind::finite: return "finite";
    case HicksKind::infinite: return "infinite";
    case HicksKind::degenerate: return "degenerate";
  }
  return "?";
}

struct HicksValue {
  HicksKind kind = HicksKind::finite;
  double value = 0.0;  // meaningful only when kind == finite
  double numerator_scaled = 0.0;
  double denominator_scaled = 0.0;

  bool is_finite() const { return kind == HicksKind::finite; }
};

namespace detail {

inline void check_pair(std::size_t n, std::size_t i, std::size_t j) {
  if (i >= n || j >= n) throw ValidationError("input pair index out of range");
  if (i == j) throw ValidationError("input pair must have distinct indices");
}

inline void check_partial(const Jet2& jet, std::span<const double> x, std::size_t k) {
  const double fk = jet.gradient[static_cast<Eigen::Index>(k)];
  double scale = std::abs(jet.value);
  for (std::size_t m = 0; m < x.size(); ++m) scale = std::max(scale, std::abs(x[m] * jet.gradient[static_cast<Eigen::Index>(m)]));
  if (!(std::abs(x[k] * fk) > 1e-14 * scale) || fk == 0.0) {
    throw DomainError("first partial derivative f_" + std::to_string(k + 1) + " vanishes at point");
  }
}

inline HicksValue hicks_from_jet(const Jet2& jet, std::span<const double> x, std::size_t i, std::size_t j) {
  check_partial(jet, x, i);
  check_partial(jet, x, j);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  const double fi = jet.gradient[ii];
  const double fj = jet.gradient[jj];
  const double fii = jet.hessian(ii, ii);
  const double fjj = jet.hessian(jj, jj);
  const double fij = jet.hessian(ii, jj);

  const double num = 1.0 / (x[i] * fi) + 1.0 / (x[j] * fj);
  const double num_scale = 1.0 / (x[i] * std::abs(fi)) + 1.0 / (x[j] * std::abs(fj));
  // Grouped so that swapping i and j gives bit-identical results.
  const double den = 2.0 * fij / (fi * fj) - (fii / (fi * fi) + fjj / (fj * fj));
  const double den_scale = 2.0 * std::abs(fij) / std::abs(fi * fj) + (std::abs(fii) / (fi * fi) + std::abs(fjj) / (fj * fj));

  HicksValue out;
  out.numerator_scaled = std::abs(num) / num_scale;
  out.denominator_scaled = den_scale > 0.0 ? std::abs(den) / den_scale : 0.0;
  const bool num_small = out.numerator_scaled < kNumeratorThreshold;
  const bool den_small = out.denominator_scaled < kDenominatorThreshold;
  if (den_small && num_small) {
    out.kind = HicksKind::degenerate;
  } else if (den_small) {
    out.kind = HicksKind::infinite;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.kind = HicksKind::finite;
    out.value = num / den;
  }
  return out;
}

}  // namespace detail

/// H_ij at x.
inline HicksValue hicks_elasticity(const FunctionExpr& expr, std::span<const double> x, std::size_t i,
                                   std::size_t j) {
  detail::check_pair(expr.input_count(), i, j);
  const Jet2 jet = evaluate_jet(expr, x);
  return detail::hicks_from_jet(jet, x, i, j);
}

/// Signed residual of the cross-multiplied CES identity
///   2 f_i f_j f_ij - f_j^2 f_ii - f_i^2 f_jj = (x_i f_i + x_j f_j) f_i f_j / (sigma x_i x_j)
/// as (LHS - RHS) / max(|LHS|, |RHS|, f^4 / (x_i x_j), summed |terms| of
/// each side).
inline double ces_residual(const FunctionExpr& expr, std::span<const double> x, double sigma, std::size_t i,
                           std::size_t j) {
  if (sigma == 0.0 || !std::isfinite(sigma)) throw ValidationError("ces_residual: sigma must be finite and nonzero");
  detail::check_pair(expr.input_count(), i, j);
  const Jet2 jet = evaluate_jet(expr, x);
  const auto ii = static_cast<Eigen::Index>(i);
  const auto jj = static_cast<Eigen::Index>(j);
  const double fi = jet.gradient[ii];
  const double fj = jet.gradient[jj];
  const double lhs = 2.0 * fi * fj * jet.hessian(ii, jj) - fj * fj * jet.hessian(ii, ii) - fi * fi * jet.hessian(jj, jj);
  const double rhs = (x[i] * fi + x[j] * fj) * fi * fj / (sigma * x[i] * x[j]);
  const double f2 = jet.value * jet.value;
  // Summed term magnitudes keep the scale meaningful where f itself is near 0.
  const double lhs_terms = std::abs(2.0 * fi * fj * jet.hessian(ii, jj)) + std::abs(fj * fj * jet.hessian(ii, ii)) +
                           std::abs(fi * fi * jet.hessian(jj, jj));
  const double rhs_terms = (std::abs(x[i] * fi) + std::abs(x[j] * fj)) * std::abs(fi * fj) / (std::abs(sigma) * x[i] * x[j]);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), f2 * f2 / (x[i] * x[j]), lhs_terms, rhs_terms});
  if (scale == 0.0) return 0.0;
  return (lhs - rhs) / scale;
}

/// s_i(x_i) + s_j(x_j) with s_k = 1/(x_k h_k') + sigma h_k'' / h_k'^2; zero
/// for every point exactly when the quasi-sum has elasticity sigma.
inline double quasisum_separated_term(const ScalarFn& h, double x, double sigma) {
  const Derivs d = h.derivs(x);
  if (d.d1 == 0.0) throw DomainError("separated residual: h' vanishes at x = " + std::to_string(x));
  return 1.0 / (x * d.d1) + sigma * d.d2 / (d.d1 * d.d1);
}

inline double quasisum_separated_residual(const QuasiSumSpec& spec, std::span<const double> x, double sigma,
                                          std::size_t i, std::size_t j) {
  detail::check_pair(spec.size(), i, j);
  if (x.size() != spec.size()) throw ValidationError("separated residual: dimension mismatch");
  if (!(x[i] > 0.0) || !(x[j] > 0.0)) throw ValidationError("separated residual: point must be positive");
  return quasisum_separated_term(spec.inner[i], x[i], sigma) + quasisum_separated_term(spec.inner[j], x[j], sigma);
}

enum class CesVerdict { regular, degenerate, not_ces };

inline std::string_view to_string(CesVerdict v) {
  switch (v) {
    case CesVerdict::regular: return "RegularCES";
    case CesVerdict::degenerate: return "DegenerateCES";
    case CesVerdict::not_ces: return "NotCES";
  }
  return "?";
}

struct PairValue {
  std::size_t i;
  std::size_t j;
  HicksValue value;
};

struct ElasticityReport {
  Point anchor;                     // box center
  std::vector<PairValue> pairs;     // every pair i < j, evaluated at the anchor
  std::optional<double> sigma_estimate;
  CesVerdict verdict = CesVerdict::not_ces;
  double max_deviation = 0.0;       // max |H - sigma| / |sigma| over samples
  std::size_t samples = 0;
  std::size_t degenerate_count = 0;
  std::size_t infinite_count = 0;
  std::size_t finite_count = 0;
};

/// Samples `samples` log-uniform points of `box` and decides whether every
/// pairwise Hicks elasticity equals one constant.
inline ElasticityReport detect_ces(const FunctionExpr& expr, const Box& box, std::size_t samples,
                                   std::uint64_t seed = kDefaultSeed, double tolerance = kCesTolerance) {
  box.validate();
  const std::size_t n = expr.input_count();
  if (box.size() != n) throw ValidationError("detect_ces: box dimension does not match input count");
  if (n < 2) throw ValidationError("detect_ces: need at least two inputs");
  if (samples < 1) throw ValidationError("detect_ces: need at least one sample");

  ElasticityReport report;
  report.samples = samples;
  report.anchor = box.center();
  {
    const Jet2 jet = evaluate_jet(expr, report.anchor);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        report.pairs.push_back({i, j, detail::hicks_from_jet(jet, report.anchor, i, j)});
      }
    }
  }
  if (report.pairs.front().value.is_finite()) report.sigma_estimate = report.pairs.front().value.value;

  const auto points = log_uniform_samples(box, samples, seed);
  std::vector<double> finite_values;
  for (const auto& x : points) {
    const Jet2 jet = evaluate_jet(expr, x);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const HicksValue h = detail::hicks_from_jet(jet, x, i, j);
        switch (h.kind) {
          case HicksKind::finite:
            ++report.finite_count;
            finite_values.push_back(h.value);
            if (!report.sigma_estimate) report.sigma_estimate = h.value;
            break;
          case HicksKind::infinite: ++report.infinite_count; break;
          case HicksKind::degenerate: ++report.degenerate_count; break;
        }
      }
    }
  }

  if (report.finite_count == 0 && report.infinite_count == 0) {
    bool anchor_degenerate = true;
    for (const auto& p : report.pairs) anchor_degenerate = anchor_degenerate && p.value.kind == HicksKind::degenerate;
    if (anchor_degenerate) {
      report.verdict = CesVerdict::degenerate;
      report.sigma_estimate.reset();
      return report;
    }
  }

  if (!report.sigma_estimate || report.sigma_estimate == 0.0) {
    report.verdict = CesVerdict::not_ces;
    report.max_deviation = std::numeric_limits<double>::infinity();
    return report;
  }
  const double sigma = *report.sigma_estimate;
  double dev = 0.0;
  for (double h : finite_values) dev = std::max(dev, std::abs(h - sigma) / std::abs(sigma));
  for (const auto& p : report.pairs) {
    dev = p.value.is_finite() ? std::max(dev, std::abs(p.value.value - sigma) / std::abs(sigma))
                              : std::numeric_limits<double>::infinity();
  }
  if (report.infinite_count > 0 || report.degenerate_count > 0) dev = std::numeric_limits<double>::infinity();
  report.max_deviation = dev;
  report.verdict = dev <= tolerance ? CesVerdict::regular : CesVerdict::not_ces;
  return report;
}

}  // namespace prodgeom

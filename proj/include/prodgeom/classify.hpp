#pragma once

/**
 * @file classify.hpp
 * @brief Classification of quasi-sum production functions with the CES
 * property, and sampled verification of the curvature and flatness
 * characterizations of linearly homogeneous ACMS / Cobb-Douglas functions.
 *
 * A CES quasi-sum F(h_1(x_1)+...+h_n(x_n)) is, up to additive shifts of the
 * h_i, one of
 *
 *   homothetic ACMS          h_i = c_i x^((sigma-1)/sigma),   sigma != 1
 *   homothetic Cobb-Douglas  h_i = alpha_i ln x
 *   two-input ratio          h_1 = -beta ln x_1, h_2 = beta ln x_2
 *
 * Matching uses the closed-form derivatives of the inner functions: each
 * branch predicts h_i' up to a constant factor, the factor is fitted at the
 * box center and the structure residual is the largest relative deviation
 * of the ratio h_i'(x) / prediction(x) from that factor.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prodgeom/elasticity.hpp"
#include "prodgeom/geometry.hpp"
#include "prodgeom/prodfun.hpp"
#include "prodgeom/sampling.hpp"

namespace prodgeom {

inline constexpr double kStructureTolerance = 1e-8;
inline constexpr double kCesResidualTolerance = 1e-8;
inline constexpr double kUnitSigmaTolerance = 1e-6;
inline constexpr double kEulerTolerance = 1e-10;
inline constexpr double kOdeTolerance = 1e-10;

enum class QuasiSumCase { homothetic_acms, homothetic_cobb_douglas, ratio_two_input, not_ces };

inline std::string_view to_string(QuasiSumCase c) {
  switch (c) {
    case QuasiSumCase::homothetic_acms: return "HomotheticACMS";
    case QuasiSumCase::homothetic_cobb_douglas: return "HomotheticCobbDouglas";
    case QuasiSumCase::ratio_two_input: return "RatioTwoInput";
    case QuasiSumCase::not_ces: return "NotCES";
  }
  return "?";
}

struct ClassificationResult {
  QuasiSumCase verdict = QuasiSumCase::not_ces;
  std::optional<double> sigma;
  /// c_i (ACMS), alpha_i (Cobb-Douglas) or the signed log coefficients
  /// (-beta, beta) (ratio).
  std::vector<double> fitted_inner;
  /// Separation constant k of the two-input branch, reported at sigma = 2.
  /// For other sigma it scales as (sigma - 1) k.
  std::optional<double> separation_k;
  double ces_residual = 0.0;
  double structure_residual = 0.0;
  ElasticityReport ces;
};

namespace detail {

/// Relative deviation of h'(x)/shape(x) from its value at the anchor, over
/// the sampled coordinates. Returns {factor at anchor, max deviation}.
inline std::pair<double, double> fit_derivative_shape(const ScalarFn& h, const std::function<double(double)>& shape,
                                                      double anchor, std::span<const double> xs) {
  const double factor = h.derivs(anchor).d1 / shape(anchor);
  if (!std::isfinite(factor) || factor == 0.0) return {factor, std::numeric_limits<double>::infinity()};
  double dev = 0.0;
  for (double x : xs) dev = std::max(dev, std::abs(h.derivs(x).d1 / (factor * shape(x)) - 1.0));
  return {factor, dev};
}

inline std::vector<double> axis_coordinates(const Box& box, const std::vector<Point>& points, std::size_t axis) {
  std::vector<double> xs{box.lo[axis], box.hi[axis]};
  for (const auto& p : points) xs.push_back(p[axis]);
  return xs;
}

}  // namespace detail

/// Decides which CES quasi-sum case `spec` falls into on `box`.
inline ClassificationResult classify_quasi_sum(const QuasiSumSpec& spec, const Box& box, std::size_t samples,
                                               std::uint64_t seed = kDefaultSeed) {
  const FunctionExpr expr = build_quasi_sum(spec, box);
  const std::size_t n = spec.size();
  ClassificationResult out;
  out.ces = detect_ces(expr, box, samples, seed);
  const auto points = log_uniform_samples(box, samples, seed);
  const Point center = box.center();

  if (out.ces.verdict == CesVerdict::not_ces) {
    out.ces_residual = out.ces.max_deviation;
    out.structure_residual = std::numeric_limits<double>::infinity();
    return out;
  }

  if (out.ces.verdict == CesVerdict::regular) {
    const double sigma = *out.ces.sigma_estimate;
    for (const auto& x : points)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          out.ces_residual = std::max(out.ces_residual, std::abs(ces_residual(expr, x, sigma, i, j)));

    const bool unit = std::abs(sigma - 1.0) <= kUnitSigmaTolerance;
    const double e = (sigma - 1.0) / sigma;
    const std::function<double(double)> shape = unit ? std::function<double(double)>([](double x) { return 1.0 / x; })
                                                     : std::function<double(double)>([e](double x) { return e * std::pow(x, e - 1.0); });
    for (std::size_t i = 0; i < n; ++i) {
      const auto xs = detail::axis_coordinates(box, points, i);
      const auto [factor, dev] = detail::fit_derivative_shape(spec.inner[i], shape, center[i], xs);
      out.fitted_inner.push_back(factor);
      out.structure_residual = std::max(out.structure_residual, dev);
    }
    if (out.structure_residual <= kStructureTolerance && out.ces_residual <= kCesResidualTolerance) {
      out.verdict = unit ? QuasiSumCase::homothetic_cobb_douglas : QuasiSumCase::homothetic_acms;
      out.sigma = unit ? 1.0 : sigma;
    }
    return out;
  }

  // Degenerate: only the two-input ratio branch remains.
  if (n != 2) {
    out.structure_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  for (double probe : {-2.0, 0.5, 3.0})
    for (const auto& x : points) out.ces_residual = std::max(out.ces_residual, std::abs(ces_residual(expr, x, probe, 0, 1)));

  const auto log_shape = [](double x) { return 1.0 / x; };
  double beta[2];
  for (std::size_t i = 0; i < 2; ++i) {
    const auto xs = detail::axis_coordinates(box, points, i);
    const auto [factor, dev] = detail::fit_derivative_shape(spec.inner[i], log_shape, center[i], xs);
    beta[i] = factor;
    out.fitted_inner.push_back(factor);
    out.structure_residual = std::max(out.structure_residual, dev);
  }
  // h_1 = -beta ln x_1 and h_2 = beta ln x_2 up to shifts.
  out.structure_residual = std::max(out.structure_residual, std::abs(beta[0] + beta[1]) / std::abs(beta[1]));
  if (out.structure_residual <= kStructureTolerance && out.ces_residual <= kCesResidualTolerance) {
    out.verdict = QuasiSumCase::ratio_two_input;
    out.separation_k = 1.0 / beta[1];
  }
  return out;
}

// Outer-function ODEs for vanishing Gauss-Kronecker curvature

/// F'(u) - (sigma - 1) u F''(u), normalized by the larger of the two terms.
/// Zero for F(u) = alpha u^(sigma/(sigma-1)) (up to an additive constant).
inline double acms_outer_ode_residual(const Derivs& F, double sigma, double u) {
  const double a = F.d1;
  const double b = (sigma - 1.0) * u * F.d2;
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? (a - b) / scale : 0.0;
}

inline double acms_outer_ode_residual(const ScalarFn& F, double sigma, double u) {
  return acms_outer_ode_residual(F.derivs(u), sigma, u);
}

/// (alpha - 1) F'(u) + alpha u F''(u), normalized by max(|(alpha-1)F'|,
/// |alpha u F''|, |F'|). Zero for F(u) = gamma u^(1/alpha) + b.
inline double cobb_douglas_outer_ode_residual(const Derivs& F, double alpha, double u) {
  const double a = (alpha - 1.0) * F.d1;
  const double b = alpha * u * F.d2;
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(F.d1)});
  return scale > 0.0 ? (a + b) / scale : 0.0;
}

inline double cobb_douglas_outer_ode_residual(const ScalarFn& F, double alpha, double u) {
  return cobb_douglas_outer_ode_residual(F.derivs(u), alpha, u);
}

enum class HomotheticKind { acms, cobb_douglas };

/// f(x) = F(u(x)) with u the ACMS sum sum c_i x_i^((sigma-1)/sigma) or the
/// Cobb-Douglas monomial prod x_i^alpha_i.
struct HomotheticProfile {
  HomotheticKind kind;
  double sigma = 1.0;      // acms
  double alpha_sum = 1.0;  // cobb_douglas
  std::function<double(std::span<const double>)> u_of_x;
  std::function<Derivs(double)> outer;
};

/// Recovers the homothetic decomposition of an expression when its family
/// admits one: acms, cobb_douglas, classified quasi-sums, and composites
/// over any of these. Ratio functions have none.
inline std::optional<HomotheticProfile> homothetic_profile(const FunctionExpr& expr, const Box& box,
                                                           std::size_t samples, std::uint64_t seed) {
  if (const auto* p = expr.get_if<AcmsParams>()) {
    HomotheticProfile prof{HomotheticKind::acms, 1.0 / (1.0 - p->rho), 1.0, {}, {}};
    prof.u_of_x = [w = p->weights, rho = p->rho](std::span<const double> x) {
      double u = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) u += w[i] * std::pow(x[i], rho);
      return u;
    };
    prof.outer = [F = ScalarFn::power(p->gamma, p->d / p->rho)](double u) { return F.derivs(u); };
    return prof;
  }
  if (const auto* p = expr.get_if<CobbDouglasParams>()) {
    double a = 0.0;
    for (double ai : p->alpha) a += ai;
    HomotheticProfile prof{HomotheticKind::cobb_douglas, 1.0, a, {}, {}};
    prof.u_of_x = [alpha = p->alpha](std::span<const double> x) {
      double u = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) u *= std::pow(x[i], alpha[i]);
      return u;
    };
    prof.outer = [F = ScalarFn::affine(p->gamma)](double u) { return F.derivs(u); };
    return prof;
  }
  if (const auto* p = expr.get_if<QuasiSumParams>()) {
    const ClassificationResult cls = classify_quasi_sum(p->spec, box, samples, seed);
    const auto& spec = p->spec;
    if (cls.verdict == QuasiSumCase::homothetic_acms) {
      // u = sum c_i x^e, and h_i = c_i x^e + s_i, so F(u) = outer(u + sum s_i)
      // where s_i is recovered at the box center.
      const double e = (*cls.sigma - 1.0) / *cls.sigma;
      const Point c = box.center();
      double shift = 0.0;
      for (std::size_t i = 0; i < spec.size(); ++i) shift += spec.inner[i](c[i]) - cls.fitted_inner[i] * std::pow(c[i], e);
      HomotheticProfile prof{HomotheticKind::acms, *cls.sigma, 1.0, {}, {}};
      prof.u_of_x = [coef = cls.fitted_inner, e](std::span<const double> x) {
        double u = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) u += coef[i] * std::pow(x[i], e);
        return u;
      };
      prof.outer = [F = spec.outer, shift](double u) { return F.derivs(u + shift); };
      return prof;
    }
    if (cls.verdict == QuasiSumCase::homothetic_cobb_douglas) {
      // u = prod x^alpha_i, h_i = alpha_i ln x + s_i, so F(u) = G(ln u + sum s_i).
      const Point c = box.center();
      double shift = 0.0;
      double a = 0.0;
      for (std::size_t i = 0; i < spec.size(); ++i) {
        shift += spec.inner[i](c[i]) - cls.fitted_inner[i] * std::log(c[i]);
        a += cls.fitted_inner[i];
      }
      HomotheticProfile prof{HomotheticKind::cobb_douglas, 1.0, a, {}, {}};
      prof.u_of_x = [alpha = cls.fitted_inner](std::span<const double> x) {
        double u = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) u *= std::pow(x[i], alpha[i]);
        return u;
      };
      prof.outer = [G = spec.outer, shift](double u) {
        const Derivs g = G.derivs(std::log(u) + shift);
        return Derivs{g.value, g.d1 / u, (g.d2 - g.d1) / (u * u)};
      };
      return prof;
    }
    return std::nullopt;
  }
  if (const auto* p = expr.get_if<CompositeParams>()) {
    auto inner = homothetic_profile(*p->inner, box, samples, seed);
    if (!inner) return std::nullopt;
    inner->outer = [G = p->outer, F = inner->outer](double u) {
      const Derivs f = F(u);
      const Derivs g = G.derivs(f.value);
      return Derivs{g.value, g.d1 * f.d1, g.d2 * f.d1 * f.d1 + g.d1 * f.d2};
    };
    return inner;
  }
  return std::nullopt;
}

// Theorem verification

enum class TheoremId { curvature, flatness };

inline std::string_view to_string(TheoremId t) { return t == TheoremId::curvature ? "4.1" : "4.2"; }

enum class TheoremVerdict { consistent, inconsistent, degenerate_hypothesis };

inline std::string_view to_string(TheoremVerdict v) {
  switch (v) {
    case TheoremVerdict::consistent: return "Consistent";
    case TheoremVerdict::inconsistent: return "Inconsistent";
    case TheoremVerdict::degenerate_hypothesis: return "DegenerateHypothesis";
  }
  return "?";
}

struct TheoremRow {
  Point x;
  double value;
  double W;
  double gauss_kronecker;
  double scaled_gauss_kronecker;
  double max_riemann;
  double flatness_residual;
  double euler_quotient;
  std::optional<double> ode_residual;
};

struct TheoremReport {
  TheoremId theorem = TheoremId::curvature;
  // Hypothesis: CES property.
  CesVerdict ces_verdict = CesVerdict::not_ces;
  std::optional<double> sigma;
  // Geometric side: G vanishes (curvature) or the graph is flat (flatness)
  // at every sample.
  bool geometric_holds = false;
  double geometric_max = 0.0;
  double geometric_threshold = 0.0;
  // Family side: the function is linearly homogeneous ACMS / Cobb-Douglas.
  bool family_holds = false;
  double euler_max_deviation = 0.0;
  // Outer-function ODE, when the expression has a homothetic profile.
  std::optional<HomotheticKind> ode_kind;
  bool ode_holds = false;
  double ode_max = 0.0;
  TheoremVerdict verdict = TheoremVerdict::inconsistent;
  std::vector<TheoremRow> rows;
};

inline TheoremReport verify_theorem(TheoremId theorem, const FunctionExpr& expr, const Box& box, std::size_t samples,
                                    std::uint64_t seed = kDefaultSeed) {
  TheoremReport r;
  r.theorem = theorem;
  const ElasticityReport ces = detect_ces(expr, box, samples, seed);
  r.ces_verdict = ces.verdict;
  r.sigma = ces.sigma_estimate;
  if (ces.verdict == CesVerdict::not_ces) {
    throw ValidationError("theorem hypothesis not satisfied: function does not have the CES property on the box");
  }

  const auto profile = homothetic_profile(expr, box, samples, seed);
  if (profile) r.ode_kind = profile->kind;

  r.geometric_threshold = theorem == TheoremId::curvature ? kVanishingCurvatureThreshold : kFlatnessThreshold;
  const auto points = log_uniform_samples(box, samples, seed);
  for (const auto& x : points) {
    const Jet2 jet = evaluate_jet(expr, x);
    const GraphGeometry g = graph_geometry_from_jet(jet, x);
    double euler = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) euler += x[i] * jet.gradient[static_cast<Eigen::Index>(i)];
    euler /= jet.value;
    TheoremRow row{x, jet.value, g.W, g.gauss_kronecker, g.scaled_gauss_kronecker, g.max_riemann, g.flatness_residual,
                   euler, std::nullopt};
    if (profile) {
      const double u = profile->u_of_x(x);
      const Derivs F = profile->outer(u);
      row.ode_residual = profile->kind == HomotheticKind::acms ? acms_outer_ode_residual(F, profile->sigma, u)
                                                               : cobb_douglas_outer_ode_residual(F, profile->alpha_sum, u);
      r.ode_max = std::max(r.ode_max, std::abs(*row.ode_residual));
    }
    const double geo = theorem == TheoremId::curvature ? g.scaled_gauss_kronecker : g.flatness_residual;
    r.geometric_max = std::max(r.geometric_max, geo);
    r.euler_max_deviation = std::max(r.euler_max_deviation, std::abs(euler - 1.0));
    r.rows.push_back(std::move(row));
  }

  r.geometric_holds = r.geometric_max <= r.geometric_threshold;
  r.family_holds = ces.verdict == CesVerdict::regular && r.euler_max_deviation <= kEulerTolerance;
  r.ode_holds = profile && r.ode_max <= kOdeTolerance;

  bool agree = r.geometric_holds == r.family_holds;
  if (profile) agree = agree && r.ode_holds == r.family_holds;
  if (agree) {
    r.verdict = TheoremVerdict::consistent;
  } else {
    r.verdict = ces.verdict == CesVerdict::degenerate ? TheoremVerdict::degenerate_hypothesis
                                                      : TheoremVerdict::inconsistent;
  }
  return r;
}

/// Vanishing Gauss-Kronecker curvature <=> linearly homogeneous ACMS or
/// Cobb-Douglas, checked on samples.
inline TheoremReport verify_curvature_theorem(const FunctionExpr& expr, const Box& box, std::size_t samples,
                                       std::uint64_t seed = kDefaultSeed) {
  return verify_theorem(TheoremId::curvature, expr, box, samples, seed);
}

/// Flat graph <=> linearly homogeneous ACMS or Cobb-Douglas, checked on
/// samples.
inline TheoremReport verify_flatness_theorem(const FunctionExpr& expr, const Box& box, std::size_t samples,
                                       std::uint64_t seed = kDefaultSeed) {
  return verify_theorem(TheoremId::flatness, expr, box, samples, seed);
}

}  // namespace prodgeom

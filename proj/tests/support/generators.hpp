#pragma once

// Random members of each function family, with the parameter ranges used
// throughout the suites. All draws come from a caller-owned mt19937_64 so
// every test is reproducible.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "prodgeom/prodfun.hpp"
#include "prodgeom/sampling.hpp"

namespace prodgeom::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }
inline double signed_uniform(Rng& rng, double lo, double hi) {
  const double v = uniform(rng, lo, hi);
  return unit_uniform(rng) < 0.5 ? -v : v;
}
inline std::size_t pick(Rng& rng, std::size_t count) {
  return static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(count)) % count;
}

// gamma in [0.5, 2], alpha_i in +-[0.2, 1.5]
inline FunctionExpr random_cobb_douglas(Rng& rng, std::size_t n) {
  std::vector<double> alpha;
  for (std::size_t i = 0; i < n; ++i) alpha.push_back(signed_uniform(rng, 0.2, 1.5));
  return build_cobb_douglas(uniform(rng, 0.5, 2.0), alpha);
}

// a_i in [0.5, 2], rho in +-[0.2, 2], d in [0.5, 2]; gamma is scaled so
// that f(1, ..., 1) is in [0.5, 2].
inline FunctionExpr random_acms(Rng& rng, std::size_t n) {
  std::vector<double> a;
  double u1 = 0.0;
  const double rho = signed_uniform(rng, 0.2, 2.0);
  const double d = uniform(rng, 0.5, 2.0);
  for (std::size_t i = 0; i < n; ++i) {
    a.push_back(uniform(rng, 0.5, 2.0));
    u1 += std::pow(a.back(), rho);
  }
  return build_acms(uniform(rng, 0.5, 2.0) / std::pow(u1, d / rho), a, rho, d);
}

/// Positive-valued strictly monotone inner function: c x^p (c > 0, p in
/// +-[0.2, 1.5]) plus a nonnegative shift, scaled by 1/n so the inner sum
/// stays O(1).
inline ScalarFn random_positive_inner(Rng& rng, std::size_t n) {
  const double scale = 1.0 / static_cast<double>(n);
  return ScalarFn::power(scale * uniform(rng, 0.5, 2.0), signed_uniform(rng, 0.2, 1.5), scale * uniform(rng, 0.0, 1.0));
}

/// Increasing outer function defined on the positive half-line.
inline ScalarFn random_outer_positive_domain(Rng& rng) {
  switch (pick(rng, 4)) {
    case 0: return ScalarFn::power(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 3.0));
    case 1: return ScalarFn::log(uniform(rng, 0.5, 2.0), uniform(rng, 0.0, 1.0));
    case 2: return ScalarFn::exp(uniform(rng, 0.2, 1.0));
    default: return ScalarFn::affine(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0));
  }
}

/// Increasing outer function defined on all of R.
inline ScalarFn random_outer_any_domain(Rng& rng) {
  return pick(rng, 2) == 0 ? ScalarFn::exp(uniform(rng, 0.2, 1.0), uniform(rng, -1.0, 1.0))
                           : ScalarFn::affine(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0));
}

inline QuasiSumSpec random_quasi_sum_spec(Rng& rng, std::size_t n) {
  QuasiSumSpec spec{random_outer_positive_domain(rng), {}};
  for (std::size_t i = 0; i < n; ++i) spec.inner.push_back(random_positive_inner(rng, n));
  return spec;
}

inline FunctionExpr random_quasi_sum(Rng& rng, std::size_t n) { return build_quasi_sum(random_quasi_sum_spec(rng, n)); }

inline FunctionExpr random_ratio(Rng& rng) {
  switch (pick(rng, 4)) {
    case 0: return build_ratio(ScalarFn::affine(uniform(rng, 0.5, 2.0), uniform(rng, -1.0, 1.0)));
    case 1: return build_ratio(ScalarFn::power(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)));
    case 2: return build_ratio(ScalarFn::exp(uniform(rng, 0.2, 1.0)));
    default: return build_ratio(ScalarFn::log(uniform(rng, 0.5, 2.0)));
  }
}

// Classification fixtures. Each returns a spec built to land in one case.

/// F(sum c_i x^e + s_i), e in +-[0.2, 0.8], so sigma = 1 / (1 - e).
inline QuasiSumSpec random_homothetic_acms_spec(Rng& rng, std::size_t n, double* sigma_out = nullptr) {
  const double e = signed_uniform(rng, 0.2, 0.8);
  if (sigma_out) *sigma_out = 1.0 / (1.0 - e);
  QuasiSumSpec spec{random_outer_positive_domain(rng), {}};
  for (std::size_t i = 0; i < n; ++i) spec.inner.push_back(ScalarFn::power(uniform(rng, 0.5, 3.0), e, uniform(rng, 0.0, 1.0)));
  return spec;
}

/// F(sum alpha_i ln x_i + s_i), alpha_i in [0.2, 1.5].
inline QuasiSumSpec random_homothetic_cobb_douglas_spec(Rng& rng, std::size_t n) {
  QuasiSumSpec spec{random_outer_any_domain(rng), {}};
  for (std::size_t i = 0; i < n; ++i) spec.inner.push_back(ScalarFn::log(uniform(rng, 0.2, 1.5), uniform(rng, -1.0, 1.0)));
  return spec;
}

/// F(-beta ln x_1 + s_1 + beta ln x_2 + s_2), beta in +-[0.3, 2].
inline QuasiSumSpec random_ratio_spec(Rng& rng, double* beta_out = nullptr) {
  const double beta = signed_uniform(rng, 0.3, 2.0);
  if (beta_out) *beta_out = beta;
  return QuasiSumSpec{random_outer_any_domain(rng),
                      {ScalarFn::log(-beta, uniform(rng, -1.0, 1.0)), ScalarFn::log(beta, uniform(rng, -1.0, 1.0))}};
}

/// Inner functions drawn from incompatible classes (two distinct power
/// exponents, power with log, or an exponential inner), so no single sigma
/// works.
inline QuasiSumSpec random_mixed_spec(Rng& rng, std::size_t n) {
  QuasiSumSpec spec{random_outer_any_domain(rng), {}};
  const double p = uniform(rng, 0.2, 0.6);
  switch (pick(rng, 3)) {
    case 0:
      spec.inner.push_back(ScalarFn::power(uniform(rng, 0.5, 2.0), p));
      spec.inner.push_back(ScalarFn::power(uniform(rng, 0.5, 2.0), p + uniform(rng, 0.4, 1.0)));
      break;
    case 1:
      spec.inner.push_back(ScalarFn::power(uniform(rng, 0.5, 2.0), p));
      spec.inner.push_back(ScalarFn::log(uniform(rng, 0.5, 2.0)));
      break;
    default:
      spec.inner.push_back(ScalarFn::exp(uniform(rng, 0.2, 1.0)));
      spec.inner.push_back(ScalarFn::log(uniform(rng, 0.5, 2.0)));
      break;
  }
  for (std::size_t i = 2; i < n; ++i) spec.inner.push_back(ScalarFn::log(uniform(rng, 0.5, 2.0)));
  return spec;
}

}  // namespace prodgeom::testing

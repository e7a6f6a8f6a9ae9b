#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "prodgeom/geometry.hpp"
#include "support/generators.hpp"

namespace prodgeom {
namespace {

using V = std::vector<double>;

TEST(GraphGeometry, ProductSurfaceAtOne) {
  // f = x1 x2 at (1,1): W^2 = 3, det H = -1, G = -1/9.
  const auto g = graph_geometry(build_cobb_douglas(1.0, {1.0, 1.0}), V{1.0, 1.0});
  EXPECT_NEAR(g.W, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(g.gauss_kronecker, -1.0 / 9.0, 1e-15);
  EXPECT_NEAR(g.hessian_det, -1.0, 1e-15);
  ASSERT_EQ(g.principal_curvatures.size(), 2);
  EXPECT_LE(g.principal_curvatures[0], g.principal_curvatures[1]);
  EXPECT_NEAR(g.principal_curvatures[0] * g.principal_curvatures[1], -1.0 / 9.0, 1e-14);
  EXPECT_NEAR(gauss_kronecker(build_cobb_douglas(1.0, {1.0, 1.0}), V{1.0, 1.0}), -1.0 / 9.0, 1e-15);
}

TEST(GraphGeometry, RatioAtOne) {
  const auto g = graph_geometry(build_ratio(ScalarFn::identity()), V{1.0, 1.0});
  EXPECT_NEAR(g.gauss_kronecker, -1.0 / 9.0, 1e-15);
}

TEST(GraphGeometry, CobbDouglasThirdsRiemannComponent) {
  const auto g = graph_geometry(build_cobb_douglas(1.0, {1.0 / 3, 1.0 / 3, 1.0 / 3}), V{1.0, 1.0, 1.0});
  EXPECT_NEAR(g.max_riemann, 1.0 / 36.0, 1e-15);
  // Linearly homogeneous: H is singular.
  EXPECT_LE(g.scaled_gauss_kronecker, 1e-14);
  EXPECT_NEAR(g.flatness_residual, g.max_riemann / (1.0 + g.second_fundamental_form.squaredNorm()), 1e-17);
}

TEST(GraphGeometry, PlaneIsFlat) {
  const auto g = graph_geometry(build_acms(1.0, {1.0, 2.0, 3.0}, 1.0, 1.0), V{0.7, 1.1, 1.9});
  EXPECT_EQ(g.max_riemann, 0.0);
  EXPECT_EQ(g.flatness_residual, 0.0);
  EXPECT_EQ(g.gauss_kronecker, 0.0);
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_EQ(g.principal_curvatures[k], 0.0);
}

TEST(GraphGeometry, GraphPoint) {
  const auto p = graph_point(build_cobb_douglas(2.0, {1.0, 1.0}), V{1.5, 2.0});
  EXPECT_EQ(p, (V{1.5, 2.0, 6.0}));
}

TEST(HadamardBound, Examples) {
  Matrix m(2, 2);
  m << 3, 4, 0, 2;
  EXPECT_DOUBLE_EQ(hadamard_bound(m), 10.0);
  EXPECT_DOUBLE_EQ(relative_det(m, 6.0), 0.6);
  EXPECT_EQ(relative_det(Matrix::Zero(2, 2), 0.0), 0.0);
}

struct Sampled {
  FunctionExpr f;
  Point x;
};

std::vector<Sampled> mixed_samples(std::uint64_t seed, int count) {
  testing::Rng rng(seed);
  std::vector<Sampled> out;
  for (int t = 0; t < count; ++t) {
    const std::size_t n = 2 + testing::pick(rng, 3);
    FunctionExpr f = [&] {
      switch (t % 4) {
        case 0: return testing::random_cobb_douglas(rng, n);
        case 1: return testing::random_acms(rng, n);
        case 2: return testing::random_quasi_sum(rng, n);
        default: return testing::random_ratio(rng);
      }
    }();
    out.push_back({f, log_uniform_point(Box::cube(f.input_count(), 0.5, 2.0), rng)});
  }
  return out;
}

TEST(GeometryProperty, MetricDeterminantIsWSquared) {
  for (const auto& s : mixed_samples(21, 200)) {
    const auto g = graph_geometry(s.f, s.x);
    EXPECT_NEAR(g.metric.determinant(), g.W * g.W, 1e-12 * g.W * g.W);
  }
}

TEST(GeometryProperty, NormalIsUnitAndOrthogonalToTangents) {
  for (const auto& s : mixed_samples(22, 200)) {
    const auto jet = evaluate_jet(s.f, s.x);
    const auto g = graph_geometry_from_jet(jet, s.x);
    EXPECT_NEAR(g.unit_normal.norm(), 1.0, 1e-14);
    const Eigen::Index n = jet.gradient.size();
    for (Eigen::Index k = 0; k < n; ++k) {
      // Tangent e_k + f_k e_{n+1}.
      const double dot = g.unit_normal[k] + jet.gradient[k] * g.unit_normal[n];
      EXPECT_LE(std::abs(dot), 1e-14 * (1.0 + std::abs(jet.gradient[k])));
    }
  }
}

TEST(GeometryProperty, ShapeOperatorDeterminantIsGaussKronecker) {
  for (const auto& s : mixed_samples(23, 200)) {
    const auto g = graph_geometry(s.f, s.x);
    const double scale = hadamard_bound(g.shape_operator) + std::abs(g.gauss_kronecker);
    EXPECT_LE(std::abs(g.shape_operator.determinant() - g.gauss_kronecker), 1e-9 * scale);
    double prod = 1.0;
    for (Eigen::Index k = 0; k < g.principal_curvatures.size(); ++k) prod *= g.principal_curvatures[k];
    EXPECT_LE(std::abs(prod - g.gauss_kronecker), 1e-9 * scale);
  }
}

TEST(GeometryProperty, FlatnessIffRankAtMostOne) {
  testing::Rng rng(24);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + testing::pick(rng, 3);
    const Point x = log_uniform_point(Box::cube(n, 0.5, 2.0), rng);
    // Rank one: F(sum c_i x_i) has Hessian F'' c c^T.
    std::vector<double> c(n);
    for (auto& ci : c) ci = testing::uniform(rng, 0.5, 2.0);
    const auto rank_one = build_composite(ScalarFn::exp(testing::uniform(rng, 0.2, 1.0)), build_acms(1.0, c, 1.0, 1.0));
    const auto flat = graph_geometry(rank_one, x);
    EXPECT_LE(flat.flatness_residual, kFlatnessThreshold);
    int nonzero = 0;
    for (Eigen::Index k = 0; k < flat.principal_curvatures.size(); ++k)
      nonzero += std::abs(flat.principal_curvatures[k]) > 1e-9 * flat.second_fundamental_form.norm();
    EXPECT_LE(nonzero, 1);

    // Rank >= 2: a quasi-sum with two curved inner functions.
    const auto curved = graph_geometry(testing::random_quasi_sum(rng, n), x);
    int curved_nonzero = 0;
    for (Eigen::Index k = 0; k < curved.principal_curvatures.size(); ++k)
      curved_nonzero += std::abs(curved.principal_curvatures[k]) > 1e-9 * curved.second_fundamental_form.norm();
    EXPECT_EQ(curved.flatness_residual > kFlatnessThreshold, curved_nonzero >= 2);
  }
}

TEST(GeometryProperty, RatioClosedForm) {
  // f = F(x2/x1): G = -F'(t)^2 / (x1^4 W^4).
  testing::Rng rng(25);
  for (int t = 0; t < 20; ++t) {
    const ScalarFn F = ScalarFn::power(testing::uniform(rng, 0.5, 2.0), testing::uniform(rng, 0.5, 3.0));
    const Point x = log_uniform_point(Box::cube(2, 0.5, 2.0), rng);
    const auto g = graph_geometry(build_ratio(F), x);
    const double d1 = F.derivs(x[1] / x[0]).d1;
    const double expected = -d1 * d1 / (std::pow(x[0], 4) * std::pow(g.W, 4));
    EXPECT_NEAR(g.gauss_kronecker, expected, 1e-10 * std::abs(expected));
  }
}

}  // namespace
}  // namespace prodgeom

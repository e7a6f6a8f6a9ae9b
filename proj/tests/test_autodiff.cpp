#include <gtest/gtest.h>

#include <vector>

#include "prodgeom/autodiff.hpp"
#include "prodgeom/prodfun.hpp"
#include "support/fd_oracle.hpp"
#include "support/generators.hpp"

namespace prodgeom {
namespace {

using testing::finite_difference_oracle;
using testing::scaled_max_diff;

TEST(LiftVariable, SeedsBasisVector) {
  const Jet2 a = lift_variable(0, 3.0, 2);
  EXPECT_EQ(a.value, 3.0);
  EXPECT_EQ(a.gradient, (Vector(2) << 1.0, 0.0).finished());
  EXPECT_TRUE(a.hessian.isZero(0.0));

  const Jet2 b = lift_variable(1, 1.0, 2);
  EXPECT_EQ(b.value, 1.0);
  EXPECT_EQ(b.gradient, (Vector(2) << 0.0, 1.0).finished());
  EXPECT_TRUE(b.hessian.isZero(0.0));
}

TEST(LiftVariable, RejectsIndexOutOfRange) { EXPECT_THROW(lift_variable(2, 5.0, 2), ValidationError); }

TEST(JetArithmetic, ProductAndPowerRules) {
  // f = x^2 y at (1, 1): grad (2, 1), H [[2, 2], [2, 0]]
  const Jet2 x = lift_variable(0, 1.0, 2);
  const Jet2 y = lift_variable(1, 1.0, 2);
  const Jet2 f = pow(x, 2.0) * y;
  EXPECT_DOUBLE_EQ(f.value, 1.0);
  EXPECT_DOUBLE_EQ(f.gradient[0], 2.0);
  EXPECT_DOUBLE_EQ(f.gradient[1], 1.0);
  EXPECT_DOUBLE_EQ(f.hessian(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(f.hessian(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(f.hessian(1, 1), 0.0);
}

TEST(JetArithmetic, LogAndExp) {
  const Jet2 x = lift_variable(0, 2.0, 1);
  const Jet2 l = log(x);
  EXPECT_DOUBLE_EQ(l.gradient[0], 0.5);
  EXPECT_DOUBLE_EQ(l.hessian(0, 0), -0.25);
  const Jet2 e = exp(x);
  EXPECT_DOUBLE_EQ(e.value, std::exp(2.0));
  EXPECT_DOUBLE_EQ(e.hessian(0, 0), std::exp(2.0));
}

TEST(JetArithmetic, DomainViolations) {
  const Jet2 neg = lift_variable(0, 1.0, 1) * -1.0;
  EXPECT_THROW(log(neg), DomainError);
  EXPECT_THROW(pow(neg, 0.5), DomainError);
  EXPECT_NO_THROW(pow(neg, 2.0));
  EXPECT_THROW(pow(Jet2::constant(0.0, 1), -1.0), DomainError);
}

TEST(JetArithmetic, DimensionMismatch) {
  EXPECT_THROW(lift_variable(0, 1.0, 2) + lift_variable(0, 1.0, 3), ValidationError);
}

TEST(EvaluateJet, CobbDouglasHalfHalf) {
  const auto f = build_cobb_douglas(1.0, {0.5, 0.5});
  const std::vector<double> x{1.0, 1.0};
  const Jet2 j = evaluate_jet(f, x);
  EXPECT_DOUBLE_EQ(j.value, 1.0);
  EXPECT_DOUBLE_EQ(j.gradient[0], 0.5);
  EXPECT_DOUBLE_EQ(j.gradient[1], 0.5);
  EXPECT_DOUBLE_EQ(j.hessian(0, 0), -0.25);
  EXPECT_DOUBLE_EQ(j.hessian(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(j.hessian(1, 1), -0.25);
  // Frozen against the central-difference oracle.
  const Jet2 fd = finite_difference_oracle(f, x);
  EXPECT_LT(scaled_max_diff(j.gradient, fd.gradient), 1e-6);
  EXPECT_LT(scaled_max_diff(j.hessian, fd.hessian), 1e-6);
}

TEST(EvaluateJet, LinearFunction) {
  const auto f = build_quasi_sum({ScalarFn::identity(), {ScalarFn::identity(), ScalarFn::identity()}});
  const std::vector<double> x{7.0, 11.0};
  const Jet2 j = evaluate_jet(f, x);
  EXPECT_EQ(j.value, 18.0);
  EXPECT_EQ(j.gradient[0], 1.0);
  EXPECT_EQ(j.gradient[1], 1.0);
  EXPECT_TRUE(j.hessian.isZero(0.0));
}

TEST(EvaluateJet, AcmsHalf) {
  // f = (sqrt x1 + sqrt x2)^2, f_i = (sqrt x1 + sqrt x2) / sqrt x_i
  const auto f = build_acms(1.0, {1.0, 1.0}, 0.5, 1.0);
  const std::vector<double> x{1.0, 1.0};
  const Jet2 j = evaluate_jet(f, x);
  EXPECT_NEAR(j.value, 4.0, 1e-14);
  EXPECT_NEAR(j.gradient[0], 2.0, 1e-14);
  EXPECT_NEAR(j.gradient[1], 2.0, 1e-14);
  const Jet2 fd = finite_difference_oracle(f, x);
  EXPECT_LT(scaled_max_diff(j.gradient, fd.gradient), 1e-6);
}

TEST(EvaluateJet, RejectsBadPoints) {
  const auto f = build_cobb_douglas(1.0, {0.5, 0.5});
  EXPECT_THROW(evaluate_jet(f, std::vector<double>{1.0}), ValidationError);
  EXPECT_THROW(evaluate_jet(f, std::vector<double>{1.0, -1.0}), ValidationError);
  // Inner ACMS sum negative under a fractional power.
  const auto g = build_acms(1.0, {1.0, -1.0}, 3.0, 1.0);
  EXPECT_THROW(evaluate_jet(g, std::vector<double>{1.0, 2.0}), DomainError);
}

TEST(FiniteDifferenceOracle, Monomial) {
  const auto f = build_cobb_douglas(1.0, {2.0, 1.0});
  const Jet2 fd = finite_difference_oracle(f, std::vector<double>{1.0, 1.0}, 1e-4);
  EXPECT_NEAR(fd.gradient[0], 2.0, 1e-6);
  EXPECT_NEAR(fd.gradient[1], 1.0, 1e-6);
}

TEST(FiniteDifferenceOracle, MatchesJetOnCobbDouglas) {
  const auto f = build_cobb_douglas(1.0, {0.5, 0.5});
  const std::vector<double> x{2.0, 8.0};
  const Jet2 fd = finite_difference_oracle(f, x, 1e-4);
  const Jet2 j = evaluate_jet(f, x);
  EXPECT_LT(scaled_max_diff(fd.gradient, j.gradient), 1e-5);
  EXPECT_LT(scaled_max_diff(fd.hessian, j.hessian), 1e-5);
}

TEST(FiniteDifferenceOracle, StepLeavingOrthant) {
  const auto f = build_cobb_douglas(1.0, {0.5, 0.5});
  EXPECT_THROW(finite_difference_oracle(f, std::vector<double>{1.0, 1.0}, 10.0), ValidationError);
}

// Property: jets match the oracle on every family, and Hessians are exactly
// symmetric.
TEST(EvaluateJetProperty, AgreesWithOracleAndIsSymmetric) {
  testing::Rng rng(7);
  const Box box = Box::cube(4, 0.5, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + testing::pick(rng, 3);
    std::vector<FunctionExpr> exprs{testing::random_cobb_douglas(rng, n), testing::random_acms(rng, n),
                                    testing::random_quasi_sum(rng, n), testing::random_ratio(rng)};
    for (const auto& f : exprs) {
      Box b = Box::cube(f.input_count(), 0.5, 2.0);
      std::mt19937_64 prng(trial);
      const Point x = log_uniform_point(b, prng);
      const Jet2 j = evaluate_jet(f, x);
      const Jet2 fd = finite_difference_oracle(f, x);
      EXPECT_LT(scaled_max_diff(j.gradient, fd.gradient), 1e-6) << to_string(f.family());
      EXPECT_LT(scaled_max_diff(j.hessian, fd.hessian), 1e-4) << to_string(f.family());
      EXPECT_TRUE(j.hessian == j.hessian.transpose()) << to_string(f.family());
    }
  }
  (void)box;
}

TEST(JetArithmeticProperty, SumAndProductCommuteAndAssociate) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3;
    auto rand_jet = [&] {
      Jet2 j = Jet2::constant(testing::uniform(rng, -2, 2), n);
      for (std::size_t i = 0; i < n; ++i) j = j + lift_variable(i, 0.0, n) * testing::uniform(rng, -1, 1);
      return j;
    };
    const Jet2 a = rand_jet(), b = rand_jet(), c = rand_jet();
    EXPECT_EQ((a + b).value, (b + a).value);
    EXPECT_EQ((a * b).value, (b * a).value);
    const double s1 = ((a + b) + c).value, s2 = (a + (b + c)).value;
    EXPECT_LE(std::abs(s1 - s2), 1e-14 * std::max(1.0, std::abs(s1)));
    const double p1 = ((a * b) * c).value, p2 = (a * (b * c)).value;
    EXPECT_LE(std::abs(p1 - p2), 1e-14 * std::max(1.0, std::abs(p1)));
    EXPECT_TRUE((a * b).hessian == (a * b).hessian.transpose());
  }
}

}  // namespace
}  // namespace prodgeom

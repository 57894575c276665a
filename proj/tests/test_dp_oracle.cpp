#include <gtest/gtest.h>

#include <cmath>

#include "remest/birth_death.hpp"
#include "remest/dp_oracle.hpp"
#include "remest/solver_a.hpp"

using namespace remest;

namespace {

const ModelSpecA kBD9 = birth_death_spec(0.3, 0.9);

}  // namespace

TEST(ValueIterate, ThresholdsMatchRenewalSolver) {
  for (double lambda : {0.5, 2.0, 4.0, 10.0, 20.0, 40.0}) {
    const auto dp = value_iterate(kBD9, lambda, 1e-10);
    ASSERT_TRUE(dp.threshold.has_value()) << lambda;
    EXPECT_EQ(*dp.threshold, optimal_costly(kBD9, lambda).k_star) << lambda;
  }
}

TEST(ValueIterate, KnownThresholds) {
  EXPECT_EQ(*value_iterate(kBD9, 2.0, 1e-10).threshold, 2);
  EXPECT_EQ(*value_iterate(kBD9, 10.0, 1e-10).threshold, 4);
  EXPECT_EQ(*value_iterate(kBD9, 40.0, 1e-10).threshold, 7);
}

TEST(ValueIterate, ValueAtZeroIsTheOptimalCost) {
  for (double lambda : {1.0, 7.5, 25.0}) {
    const auto dp = value_iterate(kBD9, lambda, 1e-11);
    EXPECT_NEAR((1.0 - 0.9) * dp.value(0), optimal_costly(kBD9, lambda).cost, 1e-8) << lambda;
  }
}

TEST(ValueIterate, StructuralInvariants) {
  const auto dp = value_iterate(kBD9, 12.0, 1e-10);
  EXPECT_TRUE(dp.even);
  EXPECT_TRUE(dp.monotone);
  EXPECT_EQ(dp.tail_error_bound, 0.0);
  for (long e = 0; e <= dp.bound; ++e) EXPECT_NEAR(dp.value(e), dp.value(-e), 1e-12);
  // Transmitting states share one value.
  const long k = *dp.threshold;
  EXPECT_NEAR(dp.value(k), dp.value(dp.bound), 1e-12);
  EXPECT_NEAR(dp.value(k), dp.exterior_value, 1e-12);
}

TEST(ValueIterate, ZeroPriceTransmitsEverywhereButZero) {
  const auto dp = value_iterate(kBD9, 0.0, 1e-10);
  ASSERT_TRUE(dp.threshold.has_value());
  EXPECT_EQ(*dp.threshold, 1);
  EXPECT_NEAR(dp.value(0), 0.0, 1e-12);
}

TEST(ValueIterate, QuadraticDistortionAndWiderSupport) {
  ModelSpecA spec{1, IntegerPmf({{-2, 0.1}, {-1, 0.2}, {0, 0.4}, {1, 0.2}, {2, 0.1}}), DistortionFn::quadratic(),
                  DiscountFactor(0.85)};
  for (double lambda : {3.0, 30.0}) {
    const auto dp = value_iterate(spec, lambda, 1e-10);
    ASSERT_TRUE(dp.threshold.has_value());
    EXPECT_EQ(*dp.threshold, optimal_costly(spec, lambda).k_star) << lambda;
  }
}

TEST(ValueIterate, RejectsBadInput) {
  EXPECT_THROW(value_iterate(birth_death_spec(0.3, 1.0), 1.0, 1e-8), std::invalid_argument);
  EXPECT_THROW(value_iterate(kBD9, -1.0, 1e-8), std::invalid_argument);
  EXPECT_THROW(value_iterate(kBD9, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(value_iterate(kBD9, 40.0, 1e-8, 3), BoundTooSmallError);
  EXPECT_THROW(value_iterate(kBD9, 1.0, 1e-8, std::nullopt, 2), ConvergenceError);
}

TEST(CompactificationRadius, Examples) {
  EXPECT_EQ(compactification_radius(kBD9, 0.45), 5);
  EXPECT_EQ(compactification_radius(kBD9, 0.0), 0);
  ModelSpecA quad{1, IntegerPmf({{-1, 0.3}, {0, 0.4}, {1, 0.3}}), DistortionFn::quadratic(), DiscountFactor(0.9)};
  EXPECT_EQ(compactification_radius(quad, 1.0), 4);
}

TEST(FixedPoint, MatchesRenewalFormulas) {
  for (long k = 1; k <= 6; ++k) {
    const auto fp = policy_evaluate_fixed_point(kBD9, k, k + 20, 1e-12);
    const auto ren = performance(kBD9, k);
    EXPECT_NEAR(fp.distortion, ren.distortion, 1e-10) << k;
    EXPECT_NEAR(fp.transmission_rate, ren.transmission_rate, 1e-10) << k;
  }
}

TEST(FixedPoint, MatchesBirthDeathClosedForm) {
  for (double beta : {0.5, 0.9, 0.99}) {
    const auto spec = birth_death_spec(0.3, beta);
    const auto fp = policy_evaluate_fixed_point(spec, 3, 10, 1e-12);
    const auto cf = bd_closed_form(0.3, DiscountFactor(beta), 3);
    EXPECT_NEAR(fp.distortion, cf.distortion, 1e-9) << beta;
    EXPECT_NEAR(fp.transmission_rate, cf.transmission_rate, 1e-9) << beta;
  }
}

TEST(FixedPoint, EdgeCases) {
  const auto fp0 = policy_evaluate_fixed_point(kBD9, 0, 5, 1e-10);
  EXPECT_EQ(fp0.distortion, 0.0);
  EXPECT_EQ(fp0.transmission_rate, 1.0);
  EXPECT_THROW(policy_evaluate_fixed_point(kBD9, 4, 4, 1e-10), std::invalid_argument);
  EXPECT_THROW(policy_evaluate_fixed_point(kBD9, -1, 4, 1e-10), std::invalid_argument);
}

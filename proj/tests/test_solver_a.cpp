#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "remest/birth_death.hpp"
#include "remest/solver_a.hpp"

using namespace remest;

TEST(SilentSystem, BirthDeathK2) {
  const auto sys = build_silent_system(birth_death_spec(0.3, 1.0), 2);
  ASSERT_EQ(sys.dimension(), 3);
  const double expected[3][3] = {{0.4, 0.3, 0.0}, {0.3, 0.4, 0.3}, {0.0, 0.3, 0.4}};
  for (long e = -1; e <= 1; ++e)
    for (long n = -1; n <= 1; ++n) EXPECT_NEAR(sys.entry(e, n), expected[e + 1][n + 1], 1e-15);
  EXPECT_EQ(sys.distortion(sys.index_of(-1)), 1.0);
  EXPECT_EQ(sys.distortion(sys.index_of(0)), 0.0);
}

TEST(SilentSystem, SingleState) {
  const auto sys = build_silent_system(birth_death_spec(0.2, 0.9), 1);
  ASSERT_EQ(sys.dimension(), 1);
  EXPECT_NEAR(sys.transition(0, 0), 0.6, 1e-15);
  EXPECT_EQ(sys.distortion(0), 0.0);
}

TEST(SilentSystem, DoubledDynamics) {
  const auto sys = build_silent_system(birth_death_spec(0.3, 1.0, 2), 2);
  EXPECT_EQ(sys.entry(1, -1), 0.0);
  EXPECT_EQ(sys.entry(1, 0), 0.0);
  EXPECT_NEAR(sys.entry(1, 1), 0.3, 1e-15);
}

TEST(SilentSystem, SubstochasticRowsAndCapacity) {
  const auto sys = build_silent_system(birth_death_spec(0.25, 1.0, -3), 6);
  for (long i = 0; i < sys.dimension(); ++i) {
    EXPECT_LE(sys.transition.row(i).sum(), 1.0 + 1e-15);
    EXPECT_GE(sys.transition.row(i).minCoeff(), 0.0);
  }
  EXPECT_THROW(build_silent_system(birth_death_spec(0.3, 1.0), 11, 20), CapacityError);
}

TEST(SolveLM, AverageCostClosedForms) {
  const auto spec = birth_death_spec(0.3, 1.0);
  auto lm = solve_lm(build_silent_system(spec, 2), spec.beta);
  EXPECT_NEAR(lm.M_at(0), 4.0 / 0.6, 1e-12);
  EXPECT_NEAR(lm.L_at(0), 2.0 * 3.0 / 1.8, 1e-12);
  lm = solve_lm(build_silent_system(spec, 3), spec.beta);
  EXPECT_NEAR(lm.M_at(0), 15.0, 1e-12);
  EXPECT_NEAR(lm.L_at(0), 24.0 / 1.8, 1e-12);
}

TEST(SolveLM, OneStateSystem) {
  for (double b : {0.5, 0.9, 1.0}) {
    const auto spec = birth_death_spec(0.3, b);
    const auto lm = solve_lm(build_silent_system(spec, 1), spec.beta);
    EXPECT_EQ(lm.L_at(0), 0.0);
    EXPECT_NEAR(lm.M_at(0), 1.0 / (1.0 - b * 0.4), 1e-14);
  }
}

TEST(SolveLM, AbsorbingChainIsSingular) {
  // a = 0 with all mass at 0: the silent set never escapes.
  ModelSpecA spec{0, IntegerPmf({{0, 1.0}}), DistortionFn::absolute(), DiscountFactor(1.0)};
  EXPECT_THROW(solve_lm(build_silent_system(spec, 2), spec.beta), SingularSystemError);
}

TEST(SolveLM, EvenAndBounded) {
  const auto spec = birth_death_spec(0.2, 0.95);
  const auto lm = solve_lm(build_silent_system(spec, 7), spec.beta);
  for (long e = 0; e < 7; ++e) {
    EXPECT_NEAR(lm.L_at(e), lm.L_at(-e), 1e-12);
    EXPECT_NEAR(lm.M_at(e), lm.M_at(-e), 1e-12);
    EXPECT_GE(lm.M_at(e), 1.0);
    EXPECT_GE(lm.L_at(e), 0.0);
  }
}

TEST(Performance, PublishedPoints) {
  auto p = performance(birth_death_spec(0.3, 1.0), 2L);
  EXPECT_NEAR(p.distortion, 0.5, 5e-5);
  EXPECT_NEAR(p.transmission_rate, 0.15, 5e-5);
  p = performance(birth_death_spec(0.3, 0.9), 5L);
  EXPECT_NEAR(p.distortion, 1.1844, 5e-5);
  EXPECT_NEAR(p.transmission_rate, 0.0111, 5e-5);
}

TEST(Performance, AlwaysTransmit) {
  const auto p = performance(birth_death_spec(0.3, 0.9), 0L, 3.5);
  EXPECT_EQ(p.distortion, 0.0);
  EXPECT_EQ(p.transmission_rate, 1.0);
  EXPECT_EQ(*p.cost, 3.5);
}

TEST(Performance, NeverTransmit) {
  EXPECT_THROW(performance(birth_death_spec(0.3, 1.0), ThresholdPolicy::never()), DivergenceError);
  // a = 0: X_t = W_{t-1}, so D = beta E|W| = 0.9 * 0.6.
  const auto p = performance(birth_death_spec(0.3, 0.9, 0), ThresholdPolicy::never());
  EXPECT_NEAR(p.distortion, 0.54, 1e-12);
  EXPECT_EQ(p.transmission_rate, 0.0);
  // Discounted random walk: D is finite and exceeds every finite threshold.
  const auto spec = birth_death_spec(0.3, 0.9);
  const auto inf = performance(spec, ThresholdPolicy::never());
  EXPECT_GT(inf.distortion, performance(spec, 30L).distortion);
}

TEST(Performance, RateAtFirstThreshold) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    // Random symmetric unimodal pmf on {-3..3}.
    double w3 = u(gen), w2 = w3 + u(gen), w1 = w2 + u(gen), w0 = w1 + u(gen);
    const double z = w0 + 2 * (w1 + w2 + w3);
    IntegerPmf pmf({{-3, w3 / z}, {-2, w2 / z}, {-1, w1 / z}, {0, w0 / z}, {1, w1 / z}, {2, w2 / z}, {3, w3 / z}});
    for (double b : {0.5, 0.9, 1.0}) {
      ModelSpecA spec{1, pmf, DistortionFn::quadratic(), DiscountFactor(b)};
      EXPECT_NEAR(performance(spec, 1L).transmission_rate, b * (1.0 - pmf(0)), 1e-12);
    }
  }
}

TEST(Performance, MonotoneInK) {
  for (double b : {0.9, 1.0}) {
    const auto spec = birth_death_spec(0.15, b, 2);
    double prevL = -1, prevM = 0, prevN = 2, prevD = -1;
    for (long k = 1; k <= 12; ++k) {
      const auto lm = solve_lm(build_silent_system(spec, k), spec.beta);
      const auto p = performance(spec, k);
      EXPECT_GT(lm.L_at(0), prevL - 1e-15);
      EXPECT_GT(lm.M_at(0), prevM);
      EXPECT_LT(p.transmission_rate, prevN);
      EXPECT_GE(p.distortion, prevD - 1e-12);
      if (k > 1) {
        EXPECT_GT(lm.L_at(0), prevL);
      }
      prevL = lm.L_at(0);
      prevM = lm.M_at(0);
      prevN = p.transmission_rate;
      prevD = p.distortion;
    }
  }
}

TEST(Performance, SignFlipSymmetry) {
  for (long a : {1L, 2L, 3L}) {
    for (long k = 1; k <= 8; ++k) {
      const auto pp = performance(birth_death_spec(0.3, 0.9, a), k);
      const auto pm = performance(birth_death_spec(0.3, 0.9, -a), k);
      EXPECT_NEAR(pp.distortion, pm.distortion, 1e-12);
      EXPECT_NEAR(pp.transmission_rate, pm.transmission_rate, 1e-12);
    }
  }
}

TEST(Performance, VanishingDiscount) {
  const auto near_one = birth_death_spec(0.3, 0.9999);
  for (long k = 1; k <= 10; ++k) {
    const auto p = performance(near_one, k);
    const auto c = bd_closed_form(0.3, DiscountFactor(1.0), k);
    EXPECT_NEAR(p.distortion, c.distortion, 5e-3);
    EXPECT_NEAR(p.transmission_rate, c.transmission_rate, 5e-3);
  }
}

TEST(Corners, PublishedValues) {
  auto c = corner_lambdas(birth_death_spec(0.3, 1.0), 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].k, 1);
  EXPECT_NEAR(c[0].lambda, 1.1111, 5e-5);
  EXPECT_NEAR(c[2].lambda, 12.3810, 5e-5);
  EXPECT_NEAR(c[2].lambda, 156.0 / 12.6, 1e-10);
  c = corner_lambdas(birth_death_spec(0.3, 0.9), 2);
  EXPECT_NEAR(c[1].lambda, 4.1021, 5e-5);
}

TEST(Corners, ContinuityAndSubmodularity) {
  for (double b : {0.9, 0.95, 1.0}) {
    const auto spec = birth_death_spec(0.3, b);
    const auto corners = corner_lambdas(spec, 10);
    for (std::size_t i = 0; i < corners.size(); ++i) {
      const double lam = corners[i].lambda;
      const auto a = performance(spec, corners[i].k, lam);
      const auto nxt = performance(spec, corners[i].k + 1, lam);
      EXPECT_NEAR(*a.cost, *nxt.cost, 1e-9);
      if (i > 0) {
        EXPECT_GT(lam, corners[i - 1].lambda);
      }
    }
    // C^(l) - C^(k) decreasing in lambda for l > k.
    for (long k = 1; k < 6; ++k) {
      const auto pk = performance(spec, k), pl = performance(spec, k + 2);
      auto diff = [&](double lam) {
        return (pl.distortion + lam * pl.transmission_rate) - (pk.distortion + lam * pk.transmission_rate);
      };
      EXPECT_LT(diff(5.0), diff(1.0));
    }
  }
}

TEST(Corners, SkipsFlatSteps) {
  // Mass only on even offsets: odd states are never visited, so every other
  // threshold leaves D unchanged.
  ModelSpecA spec{1, IntegerPmf({{-2, 0.25}, {0, 0.5}, {2, 0.25}}), DistortionFn::absolute(), DiscountFactor(0.9)};
  const auto corners = corner_lambdas(spec, 8);
  for (const auto& c : corners) {
    const auto a = performance(spec, c.k), b = performance(spec, c.k + 1);
    EXPECT_GT(b.distortion, a.distortion + kCornerTolerance);
  }
  EXPECT_LT(corners.size(), 8u);
}

TEST(OptimalCostly, WorkedExample) {
  const auto s = optimal_costly(birth_death_spec(0.3, 0.9), 20.0);
  EXPECT_EQ(s.k_star, 5);
  // The published 1.4064 is 1.1844 + 20 * 0.0111 from the rounded table
  // entries; the unrounded N^(5) = 0.011055 gives 1.40546.
  EXPECT_NEAR(s.perf.distortion, 1.1844, 5e-5);
  EXPECT_NEAR(s.perf.transmission_rate, 0.0111, 5e-5);
  EXPECT_NEAR(s.cost, s.perf.distortion + 20.0 * s.perf.transmission_rate, 1e-14);
  EXPECT_NEAR(s.cost, 1.40546, 1e-5);
}

TEST(OptimalCostly, ZeroPrice) {
  const auto s = optimal_costly(birth_death_spec(0.3, 0.9), 0.0);
  EXPECT_EQ(s.k_star, 1);
  EXPECT_EQ(s.cost, 0.0);
}

TEST(OptimalCostly, RightEndpointAndExtension) {
  const auto spec = birth_death_spec(0.3, 1.0);
  EXPECT_EQ(optimal_costly(spec, corner_lambdas(spec, 2).back().lambda).k_star, 2);
  EXPECT_EQ(optimal_costly(spec, 4.6667).k_star, 3);  // just past the rounded corner 4.66666...
  EXPECT_EQ(optimal_costly(spec, 4.6666).k_star, 2);
  // Far beyond the initial k_max of 16.
  const long k = optimal_costly(spec, 5e4).k_star;
  EXPECT_LT(bd_lambda_average(0.3, k - 1), 5e4);
  EXPECT_LE(5e4, bd_lambda_average(0.3, k));
}

TEST(OptimalCostly, NondecreasingInLambda) {
  const auto spec = birth_death_spec(0.2, 0.95);
  long prev = 0;
  for (double lam = 0.0; lam < 200.0; lam += 3.7) {
    const long k = optimal_costly(spec, lam).k_star;
    EXPECT_GE(k, prev);
    prev = k;
  }
}

TEST(OptimalConstrained, WorkedExample) {
  const auto s = optimal_constrained(birth_death_spec(0.3, 0.9), 0.1);
  EXPECT_EQ(s.policy.k_star(), 2);
  EXPECT_NEAR(s.policy.theta_star(), 0.6899, 5e-4);
  EXPECT_NEAR(s.d_star, 0.5543, 5e-4);
  EXPECT_NEAR(s.achieved_rate, 0.1, 1e-10);
}

TEST(OptimalConstrained, CornerIsPure) {
  const auto spec = birth_death_spec(0.3, 0.95);
  const auto p3 = performance(spec, 3L);
  const auto s = optimal_constrained(spec, p3.transmission_rate);
  EXPECT_EQ(s.policy.k_star(), 3);
  EXPECT_NEAR(s.policy.theta_star(), 1.0, 1e-12);
  EXPECT_NEAR(s.d_star, p3.distortion, 1e-12);
}

TEST(OptimalConstrained, ZeroDistortionRegion) {
  const auto spec = birth_death_spec(0.3, 1.0);
  EXPECT_EQ(optimal_constrained(spec, 0.6).d_star, 0.0);
  EXPECT_EQ(optimal_constrained(spec, 0.75).d_star, 0.0);
  EXPECT_THROW(optimal_constrained(spec, 0.75, true), DegenerateError);
}

TEST(OptimalConstrained, BoundaryProbabilityRealizesTheMix) {
  for (double b : {0.9, 0.95, 1.0}) {
    const auto spec = birth_death_spec(0.3, b);
    for (double alpha : {0.02, 0.1, 0.3, 0.55}) {
      const auto s = optimal_constrained(spec, alpha);
      const auto r = randomized_performance(spec, s.policy.k_star(), s.boundary_probability);
      EXPECT_NEAR(r.transmission_rate, alpha, 1e-12);
      EXPECT_NEAR(r.distortion, s.d_star, 1e-10);
    }
  }
}

TEST(OptimalConstrained, MixingWeightIsNotAPerVisitProbability) {
  const auto spec = birth_death_spec(0.3, 1.0);
  const auto s = optimal_constrained(spec, 0.1);
  EXPECT_NEAR(s.policy.theta_star(), 0.4, 1e-12);
  // Randomizing each boundary visit with theta* overshoots the rate.
  EXPECT_GT(randomized_performance(spec, 2, 0.4).transmission_rate, 0.105);
  EXPECT_LT(s.boundary_probability, s.policy.theta_star());
}

TEST(RandomizedPerformance, EndpointsAreThresholds) {
  const auto spec = birth_death_spec(0.25, 0.9, 2);
  for (long k = 1; k <= 5; ++k) {
    const auto q1 = randomized_performance(spec, k, 1.0), q0 = randomized_performance(spec, k, 0.0);
    const auto pk = performance(spec, k), pk1 = performance(spec, k + 1);
    EXPECT_NEAR(q1.distortion, pk.distortion, 1e-12);
    EXPECT_NEAR(q0.distortion, pk1.distortion, 1e-12);
    EXPECT_NEAR(q0.transmission_rate, pk1.transmission_rate, 1e-12);
  }
}

TEST(TradeoffCurveA, ConstrainedCorners) {
  const auto c = tradeoff_curve(birth_death_spec(0.3, 1.0), CurveKind::constrained, 10);
  EXPECT_TRUE(c.violations().empty());
  bool found2 = false, found3 = false;
  for (const auto& p : c.points) {
    if (std::abs(p.abscissa - 0.15) < 5e-5 && std::abs(p.ordinate - 0.5) < 5e-5) found2 = true;
    if (std::abs(p.abscissa - 0.0667) < 5e-5 && std::abs(p.ordinate - 0.8889) < 5e-5) found3 = true;
  }
  EXPECT_TRUE(found2 && found3);
}

TEST(TradeoffCurveA, CostlyFirstCorner) {
  const auto c = tradeoff_curve(birth_death_spec(0.3, 0.9), CurveKind::costly, 10);
  EXPECT_TRUE(c.violations().empty());
  EXPECT_NEAR(c.points.front().abscissa, 1.0989, 5e-5);
  EXPECT_NEAR(c.points.front().ordinate, 1.0989 * 0.54, 5e-4);
}

TEST(TradeoffCurveA, SinglePoint) {
  const auto c = tradeoff_curve(birth_death_spec(0.3, 0.9), CurveKind::constrained, 1);
  ASSERT_EQ(c.points.size(), 1u);
  EXPECT_NEAR(c.points[0].abscissa, 0.9 * 0.6, 1e-12);
  EXPECT_EQ(c.points[0].ordinate, 0.0);
}

TEST(BirthDeath, ClosedFormsMatchLinearSolve) {
  for (double p : {0.1, 0.2, 0.3})
    for (double b : {0.9, 0.95, 1.0}) {
      const auto spec = birth_death_spec(p, b);
      for (long k = 1; k <= 10; ++k) {
        const auto lin = performance(spec, k);
        const auto cf = bd_closed_form(p, DiscountFactor(b), k);
        EXPECT_NEAR(lin.distortion, cf.distortion, 1e-9);
        EXPECT_NEAR(lin.transmission_rate, cf.transmission_rate, 1e-9);
      }
    }
}

TEST(BirthDeath, PublishedClosedFormPoints) {
  auto c = bd_closed_form(0.3, DiscountFactor(1.0), 4);
  EXPECT_NEAR(c.distortion, 1.25, 1e-15);
  EXPECT_NEAR(c.transmission_rate, 0.0375, 1e-15);
  c = bd_closed_form(0.3, DiscountFactor(0.95), 2);
  EXPECT_NEAR(c.distortion, 0.4790, 5e-5);
  EXPECT_NEAR(c.transmission_rate, 0.1365, 5e-5);
  EXPECT_EQ(bd_closed_form(0.2, DiscountFactor(0.9), 1).distortion, 0.0);
  EXPECT_THROW(bd_closed_form(0.34, DiscountFactor(0.9), 2), std::invalid_argument);
}

TEST(BirthDeath, QEntries) {
  EXPECT_NEAR(bd_q_entry(0.3, DiscountFactor(1.0), 2, 0, 0), 2.0 / 0.6, 1e-12);
  EXPECT_NEAR(bd_q_entry(0.3, DiscountFactor(1.0), 3, 0, 2), 1.0 / 0.6, 1e-12);
  for (double b : {0.8, 0.95, 1.0}) {
    const long k = 6;
    const auto sys = build_silent_system(birth_death_spec(0.2, b), k);
    const long n = sys.dimension();
    const Eigen::MatrixXd Q = (Eigen::MatrixXd::Identity(n, n) - b * sys.transition).inverse();
    for (long i = -(k - 1); i < k; ++i)
      for (long j = -(k - 1); j < k; ++j) {
        EXPECT_NEAR(bd_q_entry(0.2, DiscountFactor(b), k, i, j), Q(sys.index_of(i), sys.index_of(j)), 1e-9);
        EXPECT_DOUBLE_EQ(bd_q_entry(0.2, DiscountFactor(b), k, i, j), bd_q_entry(0.2, DiscountFactor(b), k, j, i));
      }
  }
}

TEST(BirthDeath, AverageCornerPrices) {
  const auto corners = corner_lambdas(birth_death_spec(0.3, 1.0), 10);
  for (const auto& c : corners) EXPECT_NEAR(c.lambda, bd_lambda_average(0.3, c.k), 1e-9);
}

#include <gtest/gtest.h>

#include <cmath>

#include "remest/core_model.hpp"
#include "remest/quadrature.hpp"

using namespace remest;

namespace {

bool mentions(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

ModelSpecA spec_with(std::map<long, double> probs) {
  return ModelSpecA{1, IntegerPmf(std::move(probs)), DistortionFn::absolute(), DiscountFactor(0.9)};
}

}  // namespace

TEST(ValidateSpec, BirthDeathInstanceIsValid) {
  EXPECT_TRUE(validate_spec(spec_with({{-1, 0.3}, {0, 0.4}, {1, 0.3}})).empty());
}

TEST(ValidateSpec, DegenerateMassAtZero) {
  EXPECT_TRUE(mentions(validate_spec(spec_with({{0, 1.0}})), "p_0 < 1 required"));
}

TEST(ValidateSpec, Asymmetry) {
  EXPECT_TRUE(mentions(validate_spec(spec_with({{-1, 0.2}, {0, 0.4}, {1, 0.4}})), "symmetry p_n = p_{-n}"));
}

TEST(ValidateSpec, NonUnimodal) {
  EXPECT_TRUE(mentions(validate_spec(spec_with({{-2, 0.3}, {-1, 0.1}, {0, 0.2}, {1, 0.1}, {2, 0.3}})), "unimodality"));
}

TEST(ValidateSpec, BadDistortion) {
  auto s = spec_with({{-1, 0.3}, {0, 0.4}, {1, 0.3}});
  s.distortion = DistortionFn::custom([](double e) { return e; }, "odd");
  EXPECT_TRUE(mentions(validate_spec(s), "evenness"));
  s.distortion = DistortionFn::custom([](double e) { return 1.0 + e * e; }, "offset");
  EXPECT_TRUE(mentions(validate_spec(s), "d(0) = 0"));
}

TEST(ValidateSpec, GaussMarkovIsValid) { EXPECT_TRUE(validate_spec(gauss_markov_spec(1.5, 0.9, 0.7)).empty()); }

TEST(ValidateSpec, TabulatedDensityChecks) {
  // Triangular density on [-1, 1].
  auto tri = SmoothPdf::tabulated([](double w) { return std::max(0.0, 1.0 - std::abs(w)); }, 1.0);
  ModelSpecB ok{1.0, tri, DistortionFn::quadratic(), DiscountFactor(1.0)};
  EXPECT_TRUE(validate_spec(ok).empty());
  auto skew = SmoothPdf::tabulated([](double w) { return w > 0 ? 1.5 * (1.0 - w) : 0.5 * (1.0 + w); }, 1.0);
  ModelSpecB bad{1.0, skew, DistortionFn::quadratic(), DiscountFactor(1.0)};
  EXPECT_TRUE(mentions(validate_spec(bad), "symmetry"));
  auto heavy = SmoothPdf::tabulated([](double w) { return std::max(0.0, 2.0 * (1.0 - std::abs(w))); }, 1.0);
  ModelSpecB unnormalized{1.0, heavy, DistortionFn::quadratic(), DiscountFactor(1.0)};
  EXPECT_TRUE(mentions(validate_spec(unnormalized), "integrate to 1"));
}

TEST(EstimatorStep, TransmissionOverrides) { EXPECT_EQ(estimator_step(2.0, 5.0, 1.0), 5.0); }
TEST(EstimatorStep, HoldsForUnitA) { EXPECT_EQ(estimator_step(2.0, std::nullopt, 1.0), 2.0); }
TEST(EstimatorStep, PredictsLinearly) { EXPECT_EQ(estimator_step(3.0, std::nullopt, -2.0), -6.0); }

TEST(DiscountFactor, Range) {
  EXPECT_THROW(DiscountFactor(0.0), std::invalid_argument);
  EXPECT_THROW(DiscountFactor(1.0000001), std::invalid_argument);
  EXPECT_TRUE(DiscountFactor(1.0).is_average());
  EXPECT_FALSE(DiscountFactor(0.99).is_average());
}

TEST(IntegerPmf, MassToleranceAndRenormalization) {
  EXPECT_THROW(IntegerPmf({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
  EXPECT_THROW(IntegerPmf({{0, -0.1}, {1, 1.1}}), std::invalid_argument);
  const IntegerPmf pmf({{-1, 0.25}, {0, 0.5 - 4e-11}, {1, 0.25}});
  EXPECT_NEAR(pmf.truncated_mass(), 4e-11, 1e-15);
  double total = 0.0;
  for (const auto& [n, p] : pmf.probabilities()) total += p;
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_EQ(pmf(7), 0.0);
  EXPECT_EQ(pmf.support_radius(), 1);
}

TEST(ThresholdPolicy, Sentinels) {
  EXPECT_TRUE(ThresholdPolicy::always().transmits(0.0));
  EXPECT_TRUE(ThresholdPolicy::never().is_never());
  EXPECT_FALSE(ThresholdPolicy::never().transmits(1e300));
  EXPECT_TRUE(ThresholdPolicy(2.0).transmits(-2.0));
  EXPECT_FALSE(ThresholdPolicy(2.0).transmits(1.999));
  EXPECT_THROW(ThresholdPolicy(-1.0), std::invalid_argument);
  EXPECT_THROW(RandomizedThresholdPolicy(1, 1.5), std::invalid_argument);
}

TEST(TradeoffCurve, ShapeChecks) {
  TradeoffCurve c;
  c.kind = CurveKind::constrained;
  c.points = {{0.1, 2.0, {}}, {0.2, 1.0, {}}, {0.3, 0.5, {}}};
  EXPECT_TRUE(c.violations().empty());
  c.points[1].ordinate = 1.8;  // slope steepens: not convex
  EXPECT_FALSE(c.violations().empty());
  c.kind = CurveKind::costly;
  c.points = {{1.0, 1.0, {}}, {2.0, 1.5, {}}, {3.0, 1.7, {}}};
  EXPECT_TRUE(c.violations().empty());
  c.points[2].ordinate = 2.5;
  EXPECT_FALSE(c.violations().empty());
  c.points[1].abscissa = 1.0;
  EXPECT_FALSE(c.violations().empty());
}

TEST(Quadrature, WeightsSumAndSymmetry) {
  for (int n : {1, 2, 65, 129, 257}) {
    const auto g = gauss_legendre(n, 3.5);
    double sum = 0.0;
    for (double w : g.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 7.0, 1e-12) << n;
    for (std::size_t i = 0; i < g.order(); ++i) {
      EXPECT_NEAR(g.nodes[i], -g.nodes[g.order() - 1 - i], 1e-14);
      if (i > 0) {
        EXPECT_LT(g.nodes[i - 1], g.nodes[i]);
      }
    }
  }
}

TEST(Quadrature, ExactForPolynomials) {
  const auto g = gauss_legendre(5, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < g.order(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 8);
  EXPECT_NEAR(s, 2.0 / 9.0, 1e-14);
}

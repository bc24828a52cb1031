#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "twoarm/deviation_lab.hpp"

using namespace twoarm;

TEST(LemmaA, BoundAndCap) {
  const auto r = check_lemma_a(0.5, 2000, 1);
  EXPECT_EQ(r.bound_value, 37.0);
  EXPECT_EQ(r.truncation_cap, 800);
  EXPECT_TRUE(r.passed);
  EXPECT_TRUE(r.consistent());
  EXPECT_GE(r.empirical_value, 1.0);
}

TEST(LemmaA, LargeSlackStopsImmediately) {
  const auto r = check_lemma_a(100.0, 1000, 1);
  EXPECT_NEAR(r.bound_value, 1.0009, 1e-12);
  EXPECT_EQ(r.empirical_value, 1.0);
  EXPECT_TRUE(r.passed);
}

TEST(LemmaA, StandardErrorScalesWithReplications) {
  const auto a = check_lemma_a(0.5, 4000, 3);
  const auto b = check_lemma_a(0.5, 16000, 3);
  const double ratio = a.empirical_stderr / b.empirical_stderr;
  EXPECT_NEAR(ratio, 2.0, 0.4);
}

TEST(LemmaA, Errors) {
  EXPECT_THROW(check_lemma_a(0.0, 100, 1), std::domain_error);
  EXPECT_THROW(check_lemma_a(-1.0, 100, 1), std::domain_error);
  EXPECT_THROW(check_lemma_a(0.5, 1, 1), std::domain_error);
}

TEST(LemmaB, BoundValue) {
  const double l = std::log(125.0);
  EXPECT_NEAR(lemma_b_bound(1000, 0.5), (2 * l + 2 * std::sqrt(std::numbers::pi * l) + 2) / 0.25 + 1, 1e-12);
  EXPECT_NEAR(lemma_b_bound(1000, 0.5), 8 * l + 8 * std::sqrt(std::numbers::pi * l) + 8 + 1, 1e-12);
  EXPECT_THROW(lemma_b_bound(7, 0.5), std::domain_error);
}

TEST(LemmaB, ExactSumMatchesOracle) {
  long double ref = 0.0L;
  for (int n = 1; n <= 1000; ++n) {
    const long double b = std::sqrt(2.0L / n * std::log(1000.0L / n));
    ref += 1.0L - oracle::normal_cdf(std::sqrt(static_cast<long double>(n)) * (0.5L - b));
  }
  EXPECT_NEAR(lemma_b_exact(1000, 0.5), static_cast<double>(ref), 1e-11);
}

TEST(LemmaB, MonteCarloAgreesWithExactSum) {
  const auto r = check_lemma_b(0.5, 1000, 20000, 4);
  ASSERT_TRUE(r.exact_value);
  EXPECT_TRUE(r.agrees_with_exact()) << r.empirical_value << " vs " << *r.exact_value;
  EXPECT_TRUE(r.passed);
}

TEST(LemmaB, LargeGapMakesSumSmall) {
  EXPECT_LT(lemma_b_exact(1000, 20.0), 1.0 + 1e-6);
  EXPECT_LT(lemma_b_exact(1000, 50.0), lemma_b_exact(1000, 5.0));
}

TEST(LemmaC, BoundValues) {
  const double e = std::numbers::e;
  EXPECT_NEAR(lemma_c_bound(10000, 0.2), (30 * e * std::sqrt(std::log(400.0)) + 16 * e) / 400, 1e-14);
  const double T = e * e / 0.04;
  EXPECT_NEAR(lemma_c_bound(T, 0.2), (30 * std::sqrt(2.0) + 16) / e, 1e-12);
  EXPECT_THROW(lemma_c_bound(100, 0.2), std::domain_error);
  EXPECT_THROW(check_lemma_c(0.2, 100, 100, 1), std::domain_error);
}

TEST(LemmaC, ProbabilityInUnitInterval) {
  const auto r = check_lemma_c(0.2, 2000, 5000, 2);
  EXPECT_GE(r.empirical_value, 0.0);
  EXPECT_LE(r.empirical_value, 1.0);
  EXPECT_TRUE(r.passed);
}

TEST(Reflection, SingleStepIsHalfTheRightSide) {
  const auto r = check_reflection(1.0, 1, 200000, 6);
  const double lhs = std_normal_cdf(-1.0);
  EXPECT_NEAR(r.bound_value, 2 * lhs, 1e-15);
  EXPECT_NEAR(r.empirical_value, lhs, 4 * r.empirical_stderr);
  EXPECT_NEAR(reflection_ratio(r), 0.5, 0.01);
}

TEST(Reflection, FarBarrier) {
  const auto r = check_reflection(60.0, 100, 2000, 6);
  EXPECT_EQ(r.empirical_value, 0.0);
  EXPECT_LT(r.bound_value, 1e-8);
  EXPECT_TRUE(r.passed);
}

TEST(Reflection, DiscreteWalkStaysBelowBrownianValue) {
  const auto r = check_reflection(2.0, 100, 50000, 8);
  EXPECT_NEAR(r.bound_value, 2 * static_cast<double>(oracle::normal_cdf(-0.2L)), 1e-15);
  EXPECT_NEAR(r.bound_value, 0.8415, 1e-4);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.empirical_value, r.bound_value);
}

TEST(SprtError, BoundAlgebraAndRegime) {
  const auto a = check_sprt_error(0.5, 2000, 2000, 1);
  const auto b = check_sprt_error(1.0, 2000, 2000, 1);
  EXPECT_NEAR(a.bound_value, 1.0 / 500, 1e-15);
  EXPECT_NEAR(b.bound_value, a.bound_value / 4, 1e-15);
  EXPECT_THROW(check_sprt_error(0.01, 100, 100, 1), std::domain_error);
  EXPECT_TRUE(a.passed);
}

TEST(DeviationLab, DeterministicAcrossThreadCounts) {
  const auto a = check_lemma_b(0.5, 300, 3000, 12, {.threads = 1});
  const auto b = check_lemma_b(0.5, 300, 3000, 12, {.threads = 3, .chunk = 17});
  EXPECT_EQ(a.empirical_value, b.empirical_value);
  EXPECT_EQ(a.empirical_stderr, b.empirical_stderr);
  const auto c = check_lemma_c(0.3, 1000, 3000, 12, {.threads = 2});
  const auto d = check_lemma_c(0.3, 1000, 3000, 12);
  EXPECT_EQ(c.empirical_value, d.empirical_value);
}

TEST(DeviationReport, PassedMatchesDefinition) {
  DeviationReport r;
  r.bound_value = 1.0;
  r.empirical_value = 1.2;
  r.empirical_stderr = 0.1;
  r.passed = true;
  EXPECT_TRUE(r.consistent());
  r.empirical_value = 1.31;
  EXPECT_FALSE(r.consistent());
}

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qshift/errors.hpp"
#include "qshift/gmm_inference.hpp"

using namespace qshift;

TEST(Gmm, ExampleEstimate) {
  const auto fit = gmm_estimate(fixture::example());
  EXPECT_DOUBLE_EQ(fit.estimate.estimate, 2.5);
  EXPECT_NEAR(fit.min_g2, 3.176, 1e-3);
  ASSERT_EQ(fit.minimizing_segments.size(), 1u);
  EXPECT_NEAR(fit.minimizing_segments[0].lo, 0.1, 1e-12);
  EXPECT_NEAR(fit.minimizing_segments[0].hi, 4.9, 1e-12);
  EXPECT_FALSE(fit.ambiguity_flag);
  EXPECT_EQ(fit.overid.df, 2);
  EXPECT_GT(fit.overid.asymptotic_p, 0.2);
}

TEST(Gmm, ExampleConfidenceSets) {
  const auto data = fixture::example();
  const auto s95 = gmm_confidence_set(data, 0.05);
  ASSERT_EQ(s95.intervals.size(), 2u);
  EXPECT_NEAR(s95.enclosing_interval.lo, -2.7, 0.05);
  EXPECT_NEAR(s95.enclosing_interval.hi, 19.5, 0.05);
  EXPECT_EQ(gmm_confidence_set(data, 0.10).intervals.size(), 3u);
  EXPECT_EQ(gmm_confidence_set(data, 1.0 / 3.0).intervals.size(), 2u);
}

TEST(Gmm, DifferenceTestAroundUpperEnd) {
  const auto data = fixture::example();
  EXPECT_LE(gmm_difference_test(data, 19.45).statistic, 3.841);
  EXPECT_GT(gmm_difference_test(data, 19.6).statistic, 3.841);
  EXPECT_EQ(gmm_difference_test(data, 2.5).statistic, 0.0);
}

TEST(Gmm, AgreesWithDenseGrid) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const auto data = oracle::random_data(rng, 12, trial % 2 == 0);
    const auto model = moments(data.design());
    const auto expected = oracle::gmm_estimate(data.x(), data.y(), model);
    if (!expected.feasible) {
      EXPECT_THROW(gmm_estimate(data), FeasibilityError);
      continue;
    }
    const auto fit = gmm_estimate(data);
    EXPECT_NEAR(fit.estimate.estimate, expected.estimate, 1e-12);
    EXPECT_NEAR(fit.min_g2, expected.min_g2, 1e-9);
    EXPECT_EQ(fit.minimizing_segments.size(), expected.runs.size());
    EXPECT_EQ(fit.ambiguity_flag, expected.runs.size() > 1);
  }
}

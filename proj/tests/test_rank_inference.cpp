#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qshift/errors.hpp"
#include "qshift/rank_inference.hpp"

using namespace qshift;

namespace {
const WeightVector kHL = preset_weights(WeightPreset::HL);
}

TEST(Weights, PresetsAndParsing) {
  EXPECT_EQ(preset_weights(WeightPreset::Mert).values(), (Vec4{0, 0.18, 0.82, 1}));
  EXPECT_EQ(parse_weights("mood").values(), (Vec4{0, 0, 1, 1}));
  EXPECT_EQ(parse_weights("0,1,4,5").values(), (Vec4{0, 1, 4, 5}));
  EXPECT_THROW(parse_weights("1,2,3,4"), InputError);
  EXPECT_THROW(parse_weights("0,2,1,3"), InputError);
  EXPECT_THROW(parse_weights("0,1,2"), InputError);
  EXPECT_THROW(parse_weights("bogus"), InputError);
}

TEST(HodgesLehmann, ExampleEstimate) {
  const auto data = fixture::example();
  const auto model = moments(data.design());
  EXPECT_EQ(t_statistic(build_table(data, 8.7), kHL), 22.0);
  EXPECT_EQ(t_statistic(build_table(data, 8.69999), kHL), 23.0);
  const auto est = hl_estimate(data, kHL);
  EXPECT_EQ(est.estimate, 8.7);
  EXPECT_EQ(est.rule, EstimateRule::CrossingPoint);
  EXPECT_EQ(hl_estimate(trajectory(data), model, kHL).estimate, 8.7);
}

TEST(HodgesLehmann, AgreesWithDenseGrid) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto data = oracle::random_data(rng, 12, trial % 2 == 0);
    const auto model = moments(data.design());
    const auto traj = trajectory(data);
    for (auto p : {WeightPreset::HL, WeightPreset::Mood, WeightPreset::Mert}) {
      const auto w = preset_weights(p);
      const auto expected = oracle::hl_estimate(data.x(), data.y(), w.values(), model.E);
      if (!expected) {
        EXPECT_THROW(hl_estimate(traj, model, w), InternalError);
        continue;
      }
      EXPECT_NEAR(hl_estimate(traj, model, w).estimate, *expected, 1e-12);
      EXPECT_NEAR(hl_estimate(data, w).estimate, *expected, 1e-12);
    }
  }
}

TEST(NullLaw, ExampleTail) {
  const auto model = moments(make_design(23, 16));
  const RankNullDistribution law(model, kHL);
  // The quoted 4.156 is the rounded attained level at T = 28.
  const double level = law.d2_of(28.0);
  EXPECT_NEAR(level, 4.156, 5e-4);
  EXPECT_NEAR(law.d2_tail(level), 0.0436, 5e-4);
  EXPECT_NEAR(law.mean(), 22.9565, 1e-4);
  double total = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < law.values().size(); ++i) {
    total += law.probabilities()[i];
    mean += law.probabilities()[i] * law.values()[i];
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_NEAR(mean, law.mean(), 1e-10);
}

TEST(Tests, ExampleFitAndDeviate) {
  const auto data = fixture::example();
  const auto fit = fit_test(data, 8.69, Mode::Exact);
  EXPECT_NEAR(fit.statistic, 9.2, 0.05);
  ASSERT_TRUE(fit.exact_p);
  EXPECT_NEAR(*fit.exact_p, 0.021, 0.001);
  EXPECT_EQ(fit.df, 3);
  const auto asym = fit_test(data, 8.69, Mode::Asymptotic);
  EXPECT_FALSE(asym.exact_p);
  const auto dev = deviate_test(data, 8.7, kHL, Mode::Auto);
  EXPECT_TRUE(dev.exact_p);
  EXPECT_GT(*dev.exact_p, 0.5);
}

TEST(ConfidenceInterval, ExampleExact) {
  const auto set = invert_rank_test(fixture::example(), kHL, 0.05, Mode::Exact);
  ASSERT_TRUE(set.is_interval);
  EXPECT_NEAR(set.intervals[0].lo, 0.1, 0.05);
  EXPECT_NEAR(set.intervals[0].hi, 19.5, 0.05);
  ASSERT_TRUE(set.attained_level);
  EXPECT_NEAR(*set.attained_level, 0.956, 5e-4);
}

TEST(ConfidenceInterval, UnattainableLevelIsWholeLine) {
  const TwoSample tiny({1, 2}, {3, 4});
  const auto set = invert_rank_test(tiny, kHL, 0.01, Mode::Exact);
  EXPECT_TRUE(set.unattainable);
  EXPECT_FALSE(set.enclosing_interval.bounded());
}

TEST(ConfidenceInterval, BudgetRefusalInExactMode) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> x(600), y(600);
  for (auto& v : x) v = z(rng);
  for (auto& v : y) v = z(rng);
  const TwoSample big(x, y);
  EXPECT_THROW(invert_rank_test(big, kHL, 0.05, Mode::Exact), BudgetError);
  EXPECT_NO_THROW(invert_rank_test(big, kHL, 0.05, Mode::Auto));
}

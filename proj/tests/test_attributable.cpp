#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qshift/attributable.hpp"
#include "qshift/errors.hpp"

using namespace qshift;

TEST(MannWhitney, ExampleTailAndBound) {
  const auto dist = mw_null_distribution(16, 7);
  EXPECT_NEAR(dist.upper_tail(82), 0.044, 1e-3);
  const auto r = attributable_bound(fixture::example(), 0.05);
  EXPECT_EQ(r.v_observed, 87);
  EXPECT_EQ(r.total_pairs, 112);
  EXPECT_EQ(r.critical_value, 82);
  EXPECT_EQ(r.lower_bound, 6);
  EXPECT_NEAR(r.attained_confidence, 0.956, 1e-3);
}

TEST(MannWhitney, PmfMatchesPermutationEnumeration) {
  for (int n = 1; n <= 8; ++n)
    for (int m = 1; m + n <= 12; ++m) {
      const auto pmf = mw_null_distribution(n, m).pmf;
      const auto ref = oracle::permutation_mw_pmf(n, m);
      ASSERT_EQ(pmf.size(), ref.size());
      for (std::size_t v = 0; v < pmf.size(); ++v) EXPECT_NEAR(pmf[v], ref[v], 1e-14);
    }
}

TEST(MannWhitney, SymmetryAndBudget) {
  const auto d = mw_null_distribution(30, 20);
  for (std::size_t v = 0; v < d.pmf.size(); ++v) EXPECT_NEAR(d.pmf[v], d.pmf[d.pmf.size() - 1 - v], 1e-14);
  EXPECT_THROW(mw_null_distribution(2000, 2000), BudgetError);
}

TEST(Attributable, AgreesWithPermutationOracle) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> size(1, 8);
    int n = size(rng), m = size(rng);
    while (n + m < 4 || n + m > 12) {
      n = size(rng);
      m = size(rng);
    }
    std::normal_distribution<double> z;
    std::vector<double> x(m), y(n);
    for (auto& v : x) v = z(rng);
    for (auto& v : y) v = z(rng) + 1.0;
    const TwoSample data(x, y);
    const auto r = attributable_bound(data, 0.05);
    const auto ref = oracle::attributable(x, y, 0.05);
    EXPECT_EQ(r.v_observed, ref.v);
    if (ref.critical < 0) {
      EXPECT_TRUE(r.unattainable);
    } else {
      EXPECT_EQ(r.critical_value, ref.critical);
      EXPECT_EQ(r.lower_bound, ref.lower_bound);
    }
  }
}

TEST(Attributable, RejectsBadAlpha) {
  EXPECT_THROW(attributable_bound(fixture::example(), 0.0), InputError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qshift/errors.hpp"
#include "qshift/hypergeom.hpp"

using namespace qshift;

TEST(Design, QuartileIndicesAndTotals) {
  const auto d = make_design(23, 16);
  EXPECT_EQ(d.q, (std::array<int, 3>{6, 12, 18}));
  EXPECT_EQ(d.k, (std::array<int, 4>{6, 6, 6, 5}));
  EXPECT_EQ(d.m, 7);
  const auto tiny = make_design(4, 1);
  EXPECT_EQ(tiny.k, (std::array<int, 4>{1, 1, 1, 1}));
}

TEST(Design, RejectsBadSizes) {
  EXPECT_THROW(make_design(3, 1), InputError);
  EXPECT_THROW(make_design(10, 0), InputError);
  EXPECT_THROW(make_design(10, 10), InputError);
}

TEST(Moments, ExampleExpectationAndVariance) {
  const auto model = moments(make_design(23, 16));
  const Vec4 w{0, 1, 2, 3};
  EXPECT_NEAR(dot(w, model.E), 22.9565, 1e-4);
  EXPECT_NEAR(quad_form(model.V, w), 6.12064, 1e-4);
}

TEST(Moments, MatchEnumerationAndGeneralizedInverse) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int N = std::uniform_int_distribution<int>(4, 40)(rng);
    const int n = std::uniform_int_distribution<int>(1, N - 1)(rng);
    const auto d = make_design(N, n);
    const auto model = moments(d);
    Vec4 mean{};
    Mat4 second{};
    double total = 0.0, g2 = 0.0;
    for (const auto& p : enumerate_support(d)) {
      const Vec4 a = p.counts.as_vec();
      total += p.probability;
      for (int i = 0; i < 4; ++i) {
        mean[i] += p.probability * a[i];
        for (int j = 0; j < 4; ++j) second[i][j] += p.probability * a[i] * a[j];
      }
      g2 += p.probability * g2_statistic(model, a);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_NEAR(g2, 3.0, 1e-8);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(mean[i], model.E[i], 1e-10);
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(second[i][j] - mean[i] * mean[j], model.V[i][j], 1e-10);
    }
    const Mat4 vgv = mul(mul(model.V, model.Vginv), model.V);
    for (int i = 0; i < 4; ++i) {
      EXPECT_EQ(model.Vginv[0][i], 0.0);
      EXPECT_EQ(model.Vginv[i][0], 0.0);
      for (int j = 0; j < 4; ++j) EXPECT_NEAR(vgv[i][j], model.V[i][j], 1e-10);
    }
  }
}

TEST(Support, ExampleCountMatchesBruteForce) {
  const auto d = make_design(23, 16);
  EXPECT_EQ(oracle::support_count(d), 113);
  EXPECT_EQ(enumerate_support(d).size(), 113u);
}

TEST(Support, UniformForSingleTreated) {
  const auto support = enumerate_support(make_design(4, 1));
  ASSERT_EQ(support.size(), 4u);
  for (const auto& p : support) EXPECT_NEAR(p.probability, 0.25, 1e-15);
}

TEST(Support, CountsAgreeWithBruteForceForRandomDesigns) {
  for (int N = 4; N <= 30; N += 3)
    for (int n = 1; n < N; n += 2) {
      const auto d = make_design(N, n);
      EXPECT_EQ(static_cast<int>(enumerate_support(d).size()), oracle::support_count(d)) << N << "," << n;
    }
}

TEST(Support, BudgetRefusal) {
  const auto d = make_design(1000, 500);
  EXPECT_FALSE(enumerable(d));
  EXPECT_THROW(enumerate_support(d), BudgetError);
}

TEST(Pmf, ExampleTableAndValidation) {
  const auto d = make_design(23, 16);
  const CellCounts a{{6, 2, 3, 5}};
  EXPECT_GT(pmf(d, a), 0.0);
  EXPECT_NEAR(std::exp(log_pmf(d, a)), pmf(d, a), 1e-15);
  EXPECT_THROW(check_counts(d, CellCounts{{7, 2, 3, 4}}), InputError);
  EXPECT_THROW(check_counts(d, CellCounts{{6, 2, 3, 4}}), InputError);
}

TEST(G2, ExampleValueAndSupProperty) {
  const auto model = moments(make_design(23, 16));
  const Vec4 a{6, 2, 3, 5};
  const double g2 = g2_statistic(model, a);
  EXPECT_NEAR(g2, 9.1994, 1e-3);
  Vec4 diff{};
  for (int i = 0; i < 4; ++i) diff[i] = a[i] - model.E[i];
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  for (int t = 0; t < 200; ++t) {
    const Vec4 c{0.0, z(rng), z(rng), z(rng)};
    const double ratio = std::pow(dot(c, diff), 2) / quad_form(model.V, c);
    EXPECT_LE(ratio, g2 * (1.0 + 1e-10));
  }
  const Vec4 best = mul(model.Vginv, diff);
  EXPECT_NEAR(std::pow(dot(best, diff), 2) / quad_form(model.V, best), g2, 1e-8);
}

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qshift/errors.hpp"
#include "qshift/shift_table.hpp"

using namespace qshift;

TEST(TwoSample, Validation) {
  EXPECT_THROW(TwoSample({}, {1, 2, 3, 4}), InputError);
  EXPECT_THROW(TwoSample({1, 2, 3}, {}), InputError);
  EXPECT_THROW(TwoSample({1}, {2, 3}), InputError);
  EXPECT_THROW(TwoSample({1, std::nan("")}, {2, 3}), InputError);
  EXPECT_FALSE(fixture::example().has_ties());
  EXPECT_TRUE(TwoSample({1, 2}, {2, 3}).has_ties());
}

TEST(BuildTable, ExampleAtTestedShift) {
  const auto data = fixture::example();
  EXPECT_EQ(build_table(data, 8.69), (CellCounts{{6, 2, 3, 5}}));
  EXPECT_EQ(build_table(data, 8.69), oracle::pooled_sort_table(data.x(), data.y(), 8.69));
}

TEST(BuildTable, TreatedBelowControlAtTies) {
  // y - 1 = 2 ties x = 2; the treated value goes first.
  const TwoSample data({2, 10, 11}, {3, 12});
  EXPECT_EQ(build_table(data, 1.0), oracle::pooled_sort_table(data.x(), data.y(), 1.0));
  EXPECT_EQ(build_table(data, 1.0)[0], 1);
}

TEST(Trajectory, ExampleEndsAndRightContinuity) {
  const auto data = fixture::example();
  const auto traj = trajectory(data);
  // Far left every treated value lies above every control; far right below.
  EXPECT_EQ(traj.segments().front(), (CellCounts{{0, 5, 6, 5}}));
  EXPECT_EQ(traj.segments().back(), (CellCounts{{6, 6, 4, 0}}));
  EXPECT_EQ(traj.table_at(8.7), build_table(data, 8.7));
  EXPECT_EQ(traj.table_at(8.69999), build_table(data, 8.69999));
  EXPECT_NE(traj.table_at(8.7), traj.table_at(8.69999));
  const auto s = traj.segment_index(8.7);
  EXPECT_DOUBLE_EQ(traj.segment_bounds(s).lo, 8.7);
}

TEST(Trajectory, SweepMatchesScratchAndPooledSort) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto data = oracle::random_data(rng, 12, trial % 2 == 0);
    const auto fast = trajectory(data);
    const auto slow = trajectory_from_scratch(data);
    ASSERT_EQ(fast.breakpoints(), slow.breakpoints());
    ASSERT_EQ(fast.segments(), slow.segments());
    const auto bp = oracle::raw_breakpoints(data.x(), data.y());
    for (const auto& p : oracle::probes(bp)) {
      ASSERT_EQ(fast.table_at(p.at), oracle::pooled_sort_table(data.x(), data.y(), p.at));
    }
  }
}

TEST(Trajectory, NearDuplicateDifferencesCollapse) {
  const TwoSample data({0.1, 0.2}, {0.3, 0.4});
  // 0.3 - 0.1 and 0.4 - 0.2 differ in the last bits.
  const auto b = distinct_breakpoints(data);
  EXPECT_EQ(b.size(), 3u);
}

TEST(MannWhitney, ExampleCount) { EXPECT_EQ(mann_whitney_count(fixture::example()), 87); }

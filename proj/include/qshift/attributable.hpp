#pragma once

#include <cstdint>
#include <vector>

#include "qshift/shift_table.hpp"

namespace qshift {

// Working-set limit for the exact Mann-Whitney recursion, counted in stored
// probabilities: max(n,m) * min(n,m)^2 / 2.
inline constexpr std::int64_t kMannWhitneyBudget = 20'000'000;

// Exact null law of the Mann-Whitney count V = #{(i, j): y_j > x_i}.
struct MannWhitneyDist {
  int n = 0;
  int m = 0;
  std::vector<double> pmf;  // pmf[v] = Pr(V = v), v = 0..nm

  // Pr(V >= v)
  double upper_tail(std::int64_t v) const;
};

MannWhitneyDist mw_null_distribution(int n, int m, std::int64_t budget = kMannWhitneyBudget);

struct AttributableResult {
  std::int64_t v_observed = 0;
  std::int64_t total_pairs = 0;
  std::int64_t critical_value = 0;
  double attained_confidence = 0.0;
  std::int64_t lower_bound = 0;
  // No critical value reaches tail <= alpha.
  bool unattainable = false;
};

// Lower confidence bound on the number of treated-favoring comparisons
// attributable to treatment.
AttributableResult attributable_bound(const TwoSample& data, double alpha);
AttributableResult attributable_bound(std::int64_t v_observed, const MannWhitneyDist& dist,
                                      double alpha);

}  // namespace qshift

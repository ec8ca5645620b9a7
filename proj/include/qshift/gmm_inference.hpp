#pragma once

#include <vector>

#include "qshift/hypergeom.hpp"
#include "qshift/inference_types.hpp"
#include "qshift/shift_table.hpp"

namespace qshift {

struct GmmResult {
  EstimateResult estimate;
  double min_g2 = 0.0;
  // Maximal runs of adjacent segments attaining the minimum, as [lo, hi).
  std::vector<Interval> minimizing_segments;
  TestResult overid;  // min_g2 against chi-square on 2 df
  // More than one disjoint run attains the minimum; the longest (then the
  // leftmost) bounded run was used.
  bool ambiguity_flag = false;
};

// G² for every trajectory segment.
std::vector<double> segment_g2(const ShiftTrajectory& trajectory, const HypergeomModel& model);

// Minimizes G² over all segments. Throws FeasibilityError when the minimum
// is attained only on unbounded end segments.
GmmResult gmm_estimate(const ShiftTrajectory& trajectory, const HypergeomModel& model);
GmmResult gmm_estimate(const ShiftTrajectory& trajectory, const std::vector<double>& g2);
GmmResult gmm_estimate(const TwoSample& data);

// G²_{Δ0} - min G² against chi-square on 1 df; asymptotic only.
TestResult gmm_difference_test(const TwoSample& data, double delta0);
TestResult gmm_difference_test(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                               const GmmResult& fit, double delta0);

// Closure of {Δ : G²_Δ - min G² <= chi-square_1(1 - alpha)}; may be a union.
ConfidenceSet gmm_confidence_set(const TwoSample& data, double alpha);
ConfidenceSet gmm_confidence_set(const ShiftTrajectory& trajectory, const GmmResult& fit,
                                 const std::vector<double>& g2, double alpha);

}  // namespace qshift

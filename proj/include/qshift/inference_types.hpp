#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qshift/shift_table.hpp"

namespace qshift {

enum class Mode { Exact, Asymptotic, Auto };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

enum class Reference { StandardNormal, ChiSquare };

struct TestResult {
  double statistic = 0.0;
  std::optional<double> exact_p;  // present iff the support was enumerated
  double asymptotic_p = 1.0;
  Reference reference = Reference::ChiSquare;
  int df = 1;
  double delta0 = 0.0;

  double p_value() const { return exact_p.value_or(asymptotic_p); }
};

enum class EstimateRule { CrossingPoint, IntervalMidpoint };

struct EstimateResult {
  double estimate = 0.0;
  // Degenerate [b, b] for a crossing point, otherwise [lo, hi) with an open
  // upper end.
  Interval defining_interval;
  bool upper_open = false;
  EstimateRule rule = EstimateRule::CrossingPoint;
};

// Finite union of sorted, disjoint, closed intervals.
struct ConfidenceSet {
  std::vector<Interval> intervals;
  double nominal_level = 0.0;
  std::optional<double> attained_level;  // exact inversions only
  bool is_interval = false;
  Interval enclosing_interval;
  // Requested level could not be attained; the set is the whole line.
  bool unattainable = false;

  bool contains(double delta) const;
  // Every point of other lies in this set.
  bool covers(const ConfidenceSet& other) const;
};

// Closure of the union of the accepted trajectory segments, merged into
// maximal intervals. Throws FeasibilityError if nothing is accepted, which
// only heavily tied data can produce.
ConfidenceSet confidence_set_from_segments(const ShiftTrajectory& trajectory,
                                           const std::function<bool(std::size_t)>& accepted,
                                           double nominal_level);

}  // namespace qshift

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "qshift/hypergeom.hpp"

namespace qshift {

// Control observations x and treated observations y.
class TwoSample {
 public:
  // Throws InputError when a group is empty, N < 4, or a value is not finite.
  TwoSample(std::vector<double> x, std::vector<double> y);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& sorted_x() const { return sorted_x_; }
  const std::vector<double>& sorted_y() const { return sorted_y_; }
  int m() const { return static_cast<int>(x_.size()); }
  int n() const { return static_cast<int>(y_.size()); }
  int N() const { return n() + m(); }
  const QuartileDesign& design() const { return design_; }

  // Pairwise differences y_j - x_i closer than this are treated as one
  // breakpoint; it absorbs the rounding of the subtraction itself.
  double tie_tolerance() const { return tie_tolerance_; }

  // True when x or y contains repeated values, or some y_j equals some x_i.
  bool has_ties() const { return has_ties_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> sorted_x_;
  std::vector<double> sorted_y_;
  QuartileDesign design_;
  double tie_tolerance_ = 0.0;
  bool has_ties_ = false;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Table of treated counts per pooled quartile cell after subtracting delta0
// from every treated value. A treated value tied with a control value is
// ordered below it, so Δ ↦ A_Δ is right-continuous.
CellCounts build_table(const TwoSample& data, double delta0);

// Piecewise-constant map Δ ↦ A_Δ. Segment 0 is (-inf, b_0), segment s is
// [b_{s-1}, b_s) and the last segment is [b_last, +inf).
class ShiftTrajectory {
 public:
  ShiftTrajectory(QuartileDesign design, std::vector<double> breakpoints,
                  std::vector<CellCounts> segments, double tie_tolerance);

  const QuartileDesign& design() const { return design_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<CellCounts>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

  Interval segment_bounds(std::size_t s) const;
  std::size_t segment_index(double delta) const;
  const CellCounts& table_at(double delta) const { return segments_[segment_index(delta)]; }

 private:
  QuartileDesign design_;
  std::vector<double> breakpoints_;
  std::vector<CellCounts> segments_;
  double tie_tolerance_ = 0.0;
};

// Distinct breakpoints: sorted differences y_j - x_i with coincident values
// (within the tie tolerance) collapsed onto the smallest member.
std::vector<double> distinct_breakpoints(const TwoSample& data);

// Sorts the differences once and updates the table by adjacent transpositions.
ShiftTrajectory trajectory(const TwoSample& data);

// Rebuilds every segment with build_table at its left end; slow reference.
ShiftTrajectory trajectory_from_scratch(const TwoSample& data);

// #{(i, j): y_j > x_i}; exact ties count zero.
std::int64_t mann_whitney_count(const TwoSample& data);

}  // namespace qshift

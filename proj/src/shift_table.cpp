#include "qshift/shift_table.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qshift/errors.hpp"

namespace qshift {

namespace {

// 0-based quartile cell of a 1-based pooled position.
inline int cell_of(const QuartileDesign& d, int pos) {
  if (pos <= d.q[0]) return 0;
  if (pos <= d.q[1]) return 1;
  if (pos <= d.q[2]) return 2;
  return 3;
}

void check_finite(const std::vector<double>& v, const char* name) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InputError(std::string(name) + "[" + std::to_string(i) + "] is not finite");
    }
  }
}

struct PairDiff {
  double d;
  int t;  // treated index in sorted_y order
};

}  // namespace

TwoSample::TwoSample(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty()) throw InputError("control sample x is empty");
  if (y_.empty()) throw InputError("treated sample y is empty");
  if (x_.size() + y_.size() < 4) {
    throw InputError("need at least 4 observations in total (got " +
                     std::to_string(x_.size() + y_.size()) + ")");
  }
  check_finite(x_, "x");
  check_finite(y_, "y");
  sorted_x_ = x_;
  sorted_y_ = y_;
  std::sort(sorted_x_.begin(), sorted_x_.end());
  std::sort(sorted_y_.begin(), sorted_y_.end());
  design_ = make_design(N(), n());

  double scale = 0.0;
  for (double v : x_) scale = std::max(scale, std::abs(v));
  for (double v : y_) scale = std::max(scale, std::abs(v));
  tie_tolerance_ = 16.0 * std::numeric_limits<double>::epsilon() * scale;

  has_ties_ = std::adjacent_find(sorted_x_.begin(), sorted_x_.end()) != sorted_x_.end() ||
              std::adjacent_find(sorted_y_.begin(), sorted_y_.end()) != sorted_y_.end();
  for (double v : sorted_y_) {
    if (has_ties_) break;
    has_ties_ = std::binary_search(sorted_x_.begin(), sorted_x_.end(), v);
  }
}

CellCounts build_table(const TwoSample& data, double delta0) {
  const auto& xs = data.sorted_x();
  const auto& ys = data.sorted_y();
  const auto& design = data.design();
  const double threshold = delta0 + data.tie_tolerance();

  CellCounts a;
  for (int t = 0; t < data.n(); ++t) {
    const double yt = ys[t];
    // Controls strictly below the shifted treated value: y_t - x_i > Δ.
    const auto below = std::partition_point(xs.begin(), xs.end(),
                                            [&](double xi) { return yt - xi > threshold; });
    const int pos = t + static_cast<int>(below - xs.begin()) + 1;
    ++a[cell_of(design, pos)];
  }
  return a;
}

ShiftTrajectory::ShiftTrajectory(QuartileDesign design, std::vector<double> breakpoints,
                                 std::vector<CellCounts> segments, double tie_tolerance)
    : design_(design),
      breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      tie_tolerance_(tie_tolerance) {
  if (segments_.size() != breakpoints_.size() + 1) {
    throw InternalError("trajectory needs one more segment than breakpoints");
  }
}

Interval ShiftTrajectory::segment_bounds(std::size_t s) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {s == 0 ? -inf : breakpoints_[s - 1], s == breakpoints_.size() ? inf : breakpoints_[s]};
}

std::size_t ShiftTrajectory::segment_index(double delta) const {
  return static_cast<std::size_t>(
      std::upper_bound(breakpoints_.begin(), breakpoints_.end(), delta + tie_tolerance_) -
      breakpoints_.begin());
}

std::vector<double> distinct_breakpoints(const TwoSample& data) {
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(data.n()) * data.m());
  for (double yj : data.y())
    for (double xi : data.x()) diffs.push_back(yj - xi);
  std::sort(diffs.begin(), diffs.end());

  const double tol = data.tie_tolerance();
  std::vector<double> out;
  for (double d : diffs) {
    if (out.empty() || d > out.back() + tol) out.push_back(d);
  }
  return out;
}

ShiftTrajectory trajectory(const TwoSample& data) {
  const auto& xs = data.sorted_x();
  const auto& ys = data.sorted_y();
  const auto& design = data.design();
  const int n = data.n();
  const int m = data.m();

  std::vector<PairDiff> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * m);
  for (int t = 0; t < n; ++t)
    for (int i = 0; i < m; ++i) pairs.push_back({ys[t] - xs[i], t});
  std::sort(pairs.begin(), pairs.end(), [](const PairDiff& a, const PairDiff& b) {
    return a.d < b.d || (a.d == b.d && a.t < b.t);
  });

  // Δ → -inf: every control lies below every treated value.
  std::vector<int> controls_below(n, m);
  CellCounts a;
  for (int t = 0; t < n; ++t) ++a[cell_of(design, t + m + 1)];

  std::vector<double> breakpoints;
  std::vector<CellCounts> segments;
  segments.push_back(a);

  const double tol = data.tie_tolerance();
  std::size_t p = 0;
  while (p < pairs.size()) {
    const double b = pairs[p].d;
    for (; p < pairs.size() && pairs[p].d <= b + tol; ++p) {
      const int t = pairs[p].t;
      const int old_pos = t + controls_below[t] + 1;
      --controls_below[t];
      const int from = cell_of(design, old_pos);
      const int to = cell_of(design, old_pos - 1);
      if (from != to) {
        --a[from];
        ++a[to];
      }
    }
    breakpoints.push_back(b);
    segments.push_back(a);
  }
  return ShiftTrajectory(design, std::move(breakpoints), std::move(segments), tol);
}

ShiftTrajectory trajectory_from_scratch(const TwoSample& data) {
  auto breakpoints = distinct_breakpoints(data);
  std::vector<CellCounts> segments;
  segments.reserve(breakpoints.size() + 1);
  const double b0 = breakpoints.front();
  segments.push_back(build_table(data, b0 - 1.0 - std::abs(b0)));
  for (double b : breakpoints) segments.push_back(build_table(data, b));
  return ShiftTrajectory(data.design(), std::move(breakpoints), std::move(segments),
                         data.tie_tolerance());
}

std::int64_t mann_whitney_count(const TwoSample& data) {
  const auto& xs = data.sorted_x();
  std::int64_t v = 0;
  for (double yj : data.y()) {
    v += std::lower_bound(xs.begin(), xs.end(), yj) - xs.begin();
  }
  return v;
}

}  // namespace qshift

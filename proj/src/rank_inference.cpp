#include "qshift/rank_inference.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "qshift/chi_square.hpp"
#include "qshift/errors.hpp"

namespace qshift {

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

// a >= b up to the relative tolerance.
bool at_least(double a, double b) { return a >= b || close(a, b); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

bool use_exact(const QuartileDesign& design, Mode mode) {
  switch (mode) {
    case Mode::Exact:
      if (!enumerable(design)) {
        throw BudgetError("exact null distribution needs " +
                          std::to_string(support_box_size(design)) +
                          " enumeration steps; rerun with --mode asymptotic");
      }
      return true;
    case Mode::Asymptotic:
      return false;
    case Mode::Auto:
      return enumerable(design);
  }
  return false;
}

// Crossing of a nonincreasing step function T over segments with a target.
template <typename TOfSegment>
EstimateResult locate_crossing(std::size_t count, const std::function<Interval(std::size_t)>& bounds,
                               TOfSegment&& t_of, double target) {
  // first segment with T <= target (up to tolerance), then first with T < target
  auto first_where = [&](auto&& pred) {
    std::size_t lo = 0, hi = count;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (pred(t_of(mid))) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  };
  const std::size_t s_eq = first_where([&](double t) { return t < target || close(t, target); });
  const std::size_t s_below = first_where([&](double t) { return t < target && !close(t, target); });

  if (s_eq == 0 || s_below == count) {
    throw InternalError("group rank statistic never brackets its null expectation");
  }
  EstimateResult r;
  if (s_eq < s_below) {
    const Interval lo = bounds(s_eq);
    const Interval hi = bounds(s_below - 1);
    r.defining_interval = {lo.lo, hi.hi};
    if (!r.defining_interval.bounded()) {
      throw InternalError("estimating equation holds on an unbounded range");
    }
    r.upper_open = true;
    r.rule = EstimateRule::IntervalMidpoint;
    r.estimate = r.defining_interval.midpoint();
  } else {
    const double b = bounds(s_below).lo;
    r.defining_interval = {b, b};
    r.upper_open = false;
    r.rule = EstimateRule::CrossingPoint;
    r.estimate = b;
  }
  return r;
}

}  // namespace

WeightVector::WeightVector(const Vec4& w) : w_(w) {
  for (double v : w) {
    if (!std::isfinite(v)) throw InputError("weights must be finite");
  }
  if (w[0] != 0.0) throw InputError("weights must be anchored at w1 = 0");
  if (!(0.0 <= w[1] && w[1] < w[2] && w[2] <= w[3])) {
    throw InputError("weights must satisfy 0 = w1 <= w2 < w3 <= w4");
  }
}

WeightVector preset_weights(WeightPreset preset) {
  switch (preset) {
    case WeightPreset::HL:
      return WeightVector({0.0, 1.0, 2.0, 3.0});
    case WeightPreset::Mood:
      return WeightVector({0.0, 0.0, 1.0, 1.0});
    case WeightPreset::Mert:
      return WeightVector({0.0, 0.18, 0.82, 1.0});
  }
  throw InternalError("unknown weight preset");
}

std::string preset_name(WeightPreset preset) {
  switch (preset) {
    case WeightPreset::HL:
      return "HL";
    case WeightPreset::Mood:
      return "MOOD";
    case WeightPreset::Mert:
      return "MERT";
  }
  return "?";
}

WeightVector parse_weights(const std::string& text) {
  std::string lower = text;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "hl") return preset_weights(WeightPreset::HL);
  if (lower == "mood") return preset_weights(WeightPreset::Mood);
  if (lower == "mert") return preset_weights(WeightPreset::Mert);

  Vec4 w{};
  std::stringstream ss(text);
  std::string item;
  int count = 0;
  while (std::getline(ss, item, ',')) {
    if (count == 4) throw InputError("weights need exactly four values: '" + text + "'");
    try {
      std::size_t used = 0;
      w[count] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse weight '" + item + "' in '" + text + "'");
    }
    ++count;
  }
  if (count != 4) throw InputError("weights need exactly four values: '" + text + "'");
  return WeightVector(w);
}

double t_statistic(const Vec4& a, const WeightVector& w) { return dot(a, w.values()); }

double d2_statistic(const HypergeomModel& model, const Vec4& a, const WeightVector& w) {
  const double dev = dot(w.values(), a) - dot(w.values(), model.E);
  return dev * dev / quad_form(model.V, w.values());
}

RankNullDistribution::RankNullDistribution(const HypergeomModel& model, const WeightVector& w,
                                           std::int64_t budget) {
  std::vector<std::pair<double, double>> raw;
  for_each_support_point(
      model.design,
      [&](const SupportPoint& p) { raw.emplace_back(t_statistic(p.counts, w), p.probability); },
      budget);
  std::sort(raw.begin(), raw.end());
  for (const auto& [t, p] : raw) {
    if (!values_.empty() && close(values_.back(), t)) {
      probs_.back() += p;
    } else {
      values_.push_back(t);
      probs_.push_back(p);
    }
  }
  // Null mean and variance of T are wᵀE and wᵀVw.
  mean_ = dot(w.values(), model.E);
  variance_ = quad_form(model.V, w.values());

  std::vector<std::pair<double, double>> by_d2;
  for (std::size_t i = 0; i < values_.size(); ++i) by_d2.emplace_back(d2_of(values_[i]), probs_[i]);
  std::sort(by_d2.begin(), by_d2.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double tail = 0.0;
  for (const auto& [d2, p] : by_d2) {
    tail += p;
    if (!levels_.empty() && close(levels_.back().d2, d2)) {
      levels_.back().tail = tail;
    } else {
      levels_.push_back({d2, tail});
    }
  }
}

double RankNullDistribution::d2_of(double t) const {
  return (t - mean_) * (t - mean_) / variance_;
}

double RankNullDistribution::d2_tail(double d2_observed) const {
  double tail = 0.0;
  for (const auto& level : levels_) {
    if (!at_least(level.d2, d2_observed)) break;
    tail = level.tail;
  }
  return std::min(1.0, tail);
}

FitNullDistribution::FitNullDistribution(const HypergeomModel& model, std::int64_t budget) {
  std::vector<std::pair<double, double>> raw;
  for_each_support_point(
      model.design,
      [&](const SupportPoint& p) {
        raw.emplace_back(g2_statistic(model, p.counts.as_vec()), p.probability);
      },
      budget);
  std::sort(raw.begin(), raw.end());
  for (const auto& [g, p] : raw) {
    mean_ += g * p;
    if (!values_.empty() && close(values_.back(), g)) {
      upper_.back() += p;
    } else {
      values_.push_back(g);
      upper_.push_back(p);
    }
  }
  // Turn point masses into upper tails.
  for (std::size_t i = upper_.size(); i-- > 1;) upper_[i - 1] += upper_[i];
}

double FitNullDistribution::tail(double g2_observed) const {
  // First stored value that is >= the observation (tolerantly).
  auto it = std::lower_bound(values_.begin(), values_.end(), g2_observed);
  if (it != values_.begin() && close(*(it - 1), g2_observed)) --it;
  if (it == values_.end()) return 0.0;
  return std::min(1.0, upper_[static_cast<std::size_t>(it - values_.begin())]);
}

TestResult deviate_test(const HypergeomModel& model, const Vec4& a, const WeightVector& w,
                        Mode mode, double delta0) {
  TestResult r;
  r.statistic = d2_statistic(model, a, w);
  r.reference = Reference::ChiSquare;
  r.df = 1;
  r.delta0 = delta0;
  r.asymptotic_p = chi_square_sf(r.statistic, 1);
  if (use_exact(model.design, mode)) {
    r.exact_p = RankNullDistribution(model, w).d2_tail(r.statistic);
  }
  return r;
}

TestResult deviate_test(const TwoSample& data, double delta0, const WeightVector& w, Mode mode) {
  return deviate_test(moments(data.design()), build_table(data, delta0).as_vec(), w, mode, delta0);
}

TestResult fit_test(const HypergeomModel& model, const Vec4& a, Mode mode, double delta0) {
  TestResult r;
  r.statistic = g2_statistic(model, a);
  r.reference = Reference::ChiSquare;
  r.df = 3;
  r.delta0 = delta0;
  r.asymptotic_p = chi_square_sf(r.statistic, 3);
  if (use_exact(model.design, mode)) {
    r.exact_p = FitNullDistribution(model).tail(r.statistic);
  }
  return r;
}

TestResult fit_test(const TwoSample& data, double delta0, Mode mode) {
  return fit_test(moments(data.design()), build_table(data, delta0).as_vec(), mode, delta0);
}

EstimateResult hl_estimate(const TwoSample& data, const WeightVector& w) {
  const auto breakpoints = distinct_breakpoints(data);
  const double target = dot(w.values(), moments(data.design()).E);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double b0 = breakpoints.front();
  auto bounds = [&](std::size_t s) -> Interval {
    return {s == 0 ? -inf : breakpoints[s - 1], s == breakpoints.size() ? inf : breakpoints[s]};
  };
  auto t_of = [&](std::size_t s) {
    const double at = s == 0 ? b0 - 1.0 - std::abs(b0) : breakpoints[s - 1];
    return t_statistic(build_table(data, at), w);
  };
  return locate_crossing(breakpoints.size() + 1, bounds, t_of, target);
}

EstimateResult hl_estimate(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                           const WeightVector& w) {
  const double target = dot(w.values(), model.E);
  auto bounds = [&](std::size_t s) { return trajectory.segment_bounds(s); };
  auto t_of = [&](std::size_t s) { return t_statistic(trajectory.segments()[s], w); };
  return locate_crossing(trajectory.size(), bounds, t_of, target);
}

std::vector<Interval> d2_minimizing_intervals(const ShiftTrajectory& trajectory,
                                              const HypergeomModel& model,
                                              const WeightVector& w) {
  std::vector<double> d2(trajectory.size());
  for (std::size_t s = 0; s < d2.size(); ++s) {
    d2[s] = d2_statistic(model, trajectory.segments()[s].as_vec(), w);
  }
  const double best = *std::min_element(d2.begin(), d2.end());
  return confidence_set_from_segments(
             trajectory, [&](std::size_t s) { return close(d2[s], best); }, 0.0)
      .intervals;
}

ConfidenceSet invert_rank_test(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                               const WeightVector& w, double alpha, Mode mode,
                               const RankNullDistribution* null_law) {
  check_alpha(alpha);
  const double t_mean = dot(w.values(), model.E);
  const double t_var = quad_form(model.V, w.values());
  std::vector<double> d2(trajectory.size());
  for (std::size_t s = 0; s < d2.size(); ++s) {
    const double dev = t_statistic(trajectory.segments()[s], w) - t_mean;
    d2[s] = dev * dev / t_var;
  }

  if (null_law == nullptr && !use_exact(model.design, mode)) {
    const double critical = chi_square_upper_quantile(alpha, 1);
    return confidence_set_from_segments(
        trajectory, [&](std::size_t s) { return d2[s] <= critical || close(d2[s], critical); },
        1.0 - alpha);
  }

  std::optional<RankNullDistribution> owned;
  if (null_law == nullptr) {
    owned.emplace(model, w);
    null_law = &*owned;
  }
  // Largest attainable tail not above alpha; reject D² at or beyond its level.
  const RankNullDistribution::Level* cut = nullptr;
  for (const auto& level : null_law->d2_levels()) {
    if (level.tail <= alpha) {
      cut = &level;
    } else {
      break;
    }
  }
  if (cut == nullptr) {
    ConfidenceSet whole = confidence_set_from_segments(
        trajectory, [](std::size_t) { return true; }, 1.0 - alpha);
    whole.attained_level = 1.0;
    whole.unattainable = true;
    return whole;
  }
  ConfidenceSet set = confidence_set_from_segments(
      trajectory, [&](std::size_t s) { return !at_least(d2[s], cut->d2); }, 1.0 - alpha);
  set.attained_level = 1.0 - cut->tail;
  return set;
}

ConfidenceSet invert_rank_test(const TwoSample& data, const WeightVector& w, double alpha,
                               Mode mode) {
  return invert_rank_test(trajectory(data), moments(data.design()), w, alpha, mode);
}

}  // namespace qshift

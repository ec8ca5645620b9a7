#include "qshift/gmm_inference.hpp"

#include <algorithm>
#include <cmath>

#include "qshift/chi_square.hpp"
#include "qshift/errors.hpp"

namespace qshift {

namespace {

constexpr double kRelTol = 1e-9;

bool close(double a, double b) {
  return std::abs(a - b) <= kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

std::vector<double> segment_g2(const ShiftTrajectory& trajectory, const HypergeomModel& model) {
  std::vector<double> g2(trajectory.size());
  for (std::size_t s = 0; s < g2.size(); ++s) {
    g2[s] = g2_statistic(model, trajectory.segments()[s].as_vec());
  }
  return g2;
}

GmmResult gmm_estimate(const ShiftTrajectory& trajectory, const HypergeomModel& model) {
  return gmm_estimate(trajectory, segment_g2(trajectory, model));
}

GmmResult gmm_estimate(const ShiftTrajectory& trajectory, const std::vector<double>& g2) {
  GmmResult r;
  r.min_g2 = *std::min_element(g2.begin(), g2.end());

  bool open_run = false;
  for (std::size_t s = 0; s < g2.size(); ++s) {
    if (!close(g2[s], r.min_g2)) {
      open_run = false;
      continue;
    }
    const Interval seg = trajectory.segment_bounds(s);
    if (open_run) {
      r.minimizing_segments.back().hi = seg.hi;
    } else {
      r.minimizing_segments.push_back(seg);
      open_run = true;
    }
  }

  const Interval* chosen = nullptr;
  for (const auto& run : r.minimizing_segments) {
    if (!run.bounded()) continue;
    if (chosen == nullptr || run.length() > chosen->length()) chosen = &run;
  }
  if (chosen == nullptr) {
    throw FeasibilityError("G² is minimized only on an unbounded end segment; no GMM midpoint");
  }
  r.ambiguity_flag = r.minimizing_segments.size() > 1;
  r.estimate.defining_interval = *chosen;
  r.estimate.upper_open = true;
  r.estimate.rule = EstimateRule::IntervalMidpoint;
  r.estimate.estimate = chosen->midpoint();

  r.overid.statistic = r.min_g2;
  r.overid.reference = Reference::ChiSquare;
  r.overid.df = 2;
  r.overid.delta0 = r.estimate.estimate;
  r.overid.asymptotic_p = chi_square_sf(r.min_g2, 2);
  return r;
}

GmmResult gmm_estimate(const TwoSample& data) {
  return gmm_estimate(trajectory(data), moments(data.design()));
}

TestResult gmm_difference_test(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                               const GmmResult& fit, double delta0) {
  TestResult r;
  const double g2 = g2_statistic(model, trajectory.table_at(delta0).as_vec());
  r.statistic = std::max(0.0, g2 - fit.min_g2);
  r.reference = Reference::ChiSquare;
  r.df = 1;
  r.delta0 = delta0;
  r.asymptotic_p = chi_square_sf(r.statistic, 1);
  return r;
}

TestResult gmm_difference_test(const TwoSample& data, double delta0) {
  const auto traj = trajectory(data);
  const auto model = moments(data.design());
  return gmm_difference_test(traj, model, gmm_estimate(traj, model), delta0);
}

ConfidenceSet gmm_confidence_set(const ShiftTrajectory& trajectory, const GmmResult& fit,
                                 const std::vector<double>& g2, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const double critical = chi_square_upper_quantile(alpha, 1);
  return confidence_set_from_segments(
      trajectory,
      [&](std::size_t s) {
        const double excess = g2[s] - fit.min_g2;
        return excess <= critical || close(excess, critical);
      },
      1.0 - alpha);
}

ConfidenceSet gmm_confidence_set(const TwoSample& data, double alpha) {
  const auto traj = trajectory(data);
  const auto model = moments(data.design());
  const auto g2 = segment_g2(traj, model);
  return gmm_confidence_set(traj, gmm_estimate(traj, g2), g2, alpha);
}

}  // namespace qshift

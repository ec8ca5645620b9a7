#pragma once

#include <string>
#include <vector>

#include "qshift/hypergeom.hpp"
#include "qshift/inference_types.hpp"
#include "qshift/shift_table.hpp"

namespace qshift {

// Scores for the four quartile cells, anchored at w1 = 0 and satisfying
// 0 <= w2 < w3 <= w4.
class WeightVector {
 public:
  explicit WeightVector(const Vec4& w);

  const Vec4& values() const { return w_; }
  double operator[](std::size_t j) const { return w_[j]; }

 private:
  Vec4 w_;
};

enum class WeightPreset { HL, Mood, Mert };

WeightVector preset_weights(WeightPreset preset);
std::string preset_name(WeightPreset preset);

// "hl", "mood", "mert" or four comma-separated numbers.
WeightVector parse_weights(const std::string& text);

double t_statistic(const Vec4& a, const WeightVector& w);
inline double t_statistic(const CellCounts& a, const WeightVector& w) {
  return t_statistic(a.as_vec(), w);
}

// {wᵀ(a - E)}² / (wᵀVw)
double d2_statistic(const HypergeomModel& model, const Vec4& a, const WeightVector& w);

// Exact null law of T = wᵀA under the multivariate hypergeometric, collapsed
// to distinct values of T. Immutable once built; share freely across threads.
class RankNullDistribution {
 public:
  RankNullDistribution(const HypergeomModel& model, const WeightVector& w,
                       std::int64_t budget = kDefaultExactBudget);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probabilities() const { return probs_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }

  double d2_of(double t) const;
  // Pr(D² >= d2_observed)
  double d2_tail(double d2_observed) const;

  struct Level {
    double d2 = 0.0;
    double tail = 0.0;  // Pr(D² >= d2)
  };
  // Distinct attainable D² values, largest first.
  const std::vector<Level>& d2_levels() const { return levels_; }

 private:
  std::vector<double> values_;
  std::vector<double> probs_;
  std::vector<Level> levels_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

// Exact null law of G² over the support.
class FitNullDistribution {
 public:
  explicit FitNullDistribution(const HypergeomModel& model,
                               std::int64_t budget = kDefaultExactBudget);

  // Pr(G² >= g2_observed)
  double tail(double g2_observed) const;
  double mean() const { return mean_; }

 private:
  std::vector<double> values_;  // ascending
  std::vector<double> upper_;   // upper_[i] = Pr(G² >= values_[i])
  double mean_ = 0.0;
};

// Deviate test for an already-built table. exact_p is filled in exact mode,
// and in auto mode whenever the support is enumerable.
TestResult deviate_test(const HypergeomModel& model, const Vec4& a, const WeightVector& w,
                        Mode mode, double delta0 = 0.0);
TestResult deviate_test(const TwoSample& data, double delta0, const WeightVector& w,
                        Mode mode);

// G² test of the shift model at delta0 against chi-square on 3 df.
TestResult fit_test(const HypergeomModel& model, const Vec4& a, Mode mode, double delta0 = 0.0);
TestResult fit_test(const TwoSample& data, double delta0, Mode mode);

// Hodges-Lehmann estimate solving wᵀA_Δ = wᵀE: the crossing breakpoint when
// T jumps past wᵀE, else the midpoint of the interval where T equals it.
// This overload binary-searches breakpoints with build_table.
EstimateResult hl_estimate(const TwoSample& data, const WeightVector& w);
EstimateResult hl_estimate(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                           const WeightVector& w);

// Segments where D² attains its minimum, merged; diagnostic only.
std::vector<Interval> d2_minimizing_intervals(const ShiftTrajectory& trajectory,
                                              const HypergeomModel& model,
                                              const WeightVector& w);

// Confidence set by inverting the deviate test. In exact mode the level is
// the largest attainable tail not above alpha; pass `null_law` to reuse a
// prebuilt distribution.
ConfidenceSet invert_rank_test(const ShiftTrajectory& trajectory, const HypergeomModel& model,
                               const WeightVector& w, double alpha, Mode mode,
                               const RankNullDistribution* null_law = nullptr);
ConfidenceSet invert_rank_test(const TwoSample& data, const WeightVector& w, double alpha,
                               Mode mode);

}  // namespace qshift

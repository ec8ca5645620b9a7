#pragma once

#include <functional>
#include <string>
#include <variant>

#include "qshift/linalg4.hpp"
#include "qshift/rank_inference.hpp"

namespace qshift {

struct NormalDensity {};
struct CauchyDensity {};
// Standard Normal plus an independent unit-rate Exponential.
struct NormalPlusExponentialDensity {};
// Density f, its derivative f', and quantile F⁻¹ supplied by the caller.
struct UserDensity {
  std::string name;
  std::function<double(double)> density;
  std::function<double(double)> derivative;
  std::function<double(double)> quantile;
};

using ScoreDistribution =
    std::variant<NormalDensity, CauchyDensity, NormalPlusExponentialDensity, UserDensity>;

std::string distribution_name(const ScoreDistribution& dist);
// "normal", "cauchy" or "ne".
ScoreDistribution parse_distribution(const std::string& text);

double density(const ScoreDistribution& dist, double x);
double quantile(const ScoreDistribution& dist, double u);

// φ(u, f) = -f'(F⁻¹(u)) / f(F⁻¹(u)); rejects u outside (0, 1).
double score_function(const ScoreDistribution& dist, double u);

// ∫ φ(u, f) du over the four quartile bands by adaptive tanh-sinh quadrature
// with absolute tolerance 1e-9 per band.
Vec4 band_integrals_quadrature(const ScoreDistribution& dist);
// Same integrals from the antiderivative -f(F⁻¹(u)).
Vec4 band_integrals_closed_form(const ScoreDistribution& dist);

// Limiting covariance of A/√N: 3c on the diagonal, -c elsewhere, c = λ(1-λ)/16.
Mat4 limiting_covariance(double lambda);

struct ScoreModel {
  ScoreDistribution distribution;
  double lambda = 0.5;
  Vec4 eta{};
  Mat4 Sigma{};
  Mat4 Sigma_ginv{};
  // Σ⁻η shifted to start at 0 and scaled to end at 1.
  Vec4 optimal_w{};
};

ScoreModel band_scores(const ScoreDistribution& dist, double lambda);

// δ wᵀη / √(wᵀΣw)
double noncentrality(const Vec4& w, const ScoreModel& model, double delta);
inline double noncentrality(const WeightVector& w, const ScoreModel& model, double delta) {
  return noncentrality(w.values(), model, delta);
}

// Squared ratio of the two noncentralities at δ = 1.
double relative_efficiency(const Vec4& w1, const Vec4& w2, const ScoreModel& model);

}  // namespace qshift

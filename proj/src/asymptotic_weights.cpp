#include "qshift/asymptotic_weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "qshift/chi_square.hpp"
#include "qshift/errors.hpp"

namespace qshift {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Mills ratio Φ(-z)/φ(z), accurate in relative terms for any z.
double mills_ratio(double z) {
  if (z > 30.0) {
    const double r = 1.0 / (z * z);
    return (1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r))) / z;
  }
  return 0.5 * std::erfc(z / std::numbers::sqrt2) / normal_pdf(z);
}

// Normal + Exponential: f(x) = φ(x) R(1 - x), F(x) = φ(x) [R(-x) - R(1 - x)].
double ne_density(double x) {
  if (x > 1.0) return std::exp(0.5 - x) * normal_cdf(x - 1.0);
  return normal_pdf(x) * mills_ratio(1.0 - x);
}

double ne_cdf(double x) {
  if (x > 0.0) return normal_cdf(x) - std::exp(0.5 - x) * normal_cdf(x - 1.0);
  return normal_pdf(x) * (mills_ratio(-x) - mills_ratio(1.0 - x));
}

double ne_quantile(double u) {
  double lo = -1.0, hi = 1.0;
  while (ne_cdf(lo) > u) lo *= 2.0;
  while (ne_cdf(hi) < u) hi *= 2.0;
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve([u](double x) { return ne_cdf(x) - u; }, lo, hi,
                                                  [](double l, double r) {
                                                    return std::abs(r - l) <= 1e-12 * std::max(1.0, std::abs(l));
                                                  },
                                                  max_iter);
  return 0.5 * (a + b);
}

void check_unit(double u) {
  if (!(u > 0.0 && u < 1.0)) throw InputError("score function needs 0 < u < 1");
}

}  // namespace

std::string distribution_name(const ScoreDistribution& dist) {
  return std::visit(overloaded{[](const NormalDensity&) { return std::string("normal"); },
                               [](const CauchyDensity&) { return std::string("cauchy"); },
                               [](const NormalPlusExponentialDensity&) { return std::string("ne"); },
                               [](const UserDensity& d) { return d.name; }},
                    dist);
}

ScoreDistribution parse_distribution(const std::string& text) {
  if (text == "normal" || text == "n") return NormalDensity{};
  if (text == "cauchy" || text == "c") return CauchyDensity{};
  if (text == "ne" || text == "normal+exponential") return NormalPlusExponentialDensity{};
  throw InputError("unknown distribution '" + text + "' (expected normal, cauchy or ne)");
}

double density(const ScoreDistribution& dist, double x) {
  if (std::isinf(x)) return 0.0;
  return std::visit(
      overloaded{[&](const NormalDensity&) { return normal_pdf(x); },
                 [&](const CauchyDensity&) { return 1.0 / (std::numbers::pi * (1.0 + x * x)); },
                 [&](const NormalPlusExponentialDensity&) { return ne_density(x); },
                 [&](const UserDensity& d) { return d.density(x); }},
      dist);
}

double quantile(const ScoreDistribution& dist, double u) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (u <= 0.0) return -inf;
  if (u >= 1.0) return inf;
  return std::visit(
      overloaded{[&](const NormalDensity&) {
                   return boost::math::quantile(boost::math::normal_distribution<double>(), u);
                 },
                 [&](const CauchyDensity&) { return std::tan(std::numbers::pi * (u - 0.5)); },
                 [&](const NormalPlusExponentialDensity&) { return ne_quantile(u); },
                 [&](const UserDensity& d) { return d.quantile(u); }},
      dist);
}

double score_function(const ScoreDistribution& dist, double u) {
  check_unit(u);
  const double x = quantile(dist, u);
  return std::visit(
      overloaded{[&](const NormalDensity&) { return x; },
                 [&](const CauchyDensity&) { return 2.0 * x / (1.0 + x * x); },
                 [&](const NormalPlusExponentialDensity&) {
                   // -f'/f = 1 - φ(x-1)/Φ(x-1)
                   return 1.0 - 1.0 / mills_ratio(1.0 - x);
                 },
                 [&](const UserDensity& d) { return -d.derivative(x) / d.density(x); }},
      dist);
}

Vec4 band_integrals_quadrature(const ScoreDistribution& dist) {
  // Tanh-sinh copes with the integrable endpoint singularities at u = 0, 1.
  // Abscissae stay 1e-14 from the ends; the skipped mass is far below 1e-9.
  boost::math::quadrature::tanh_sinh<double> integrator(15, 1e-14);
  Vec4 out{};
  for (int g = 0; g < 4; ++g) {
    double error = 0.0;
    const double value = integrator.integrate(
        [&](double u) { return u > 0.0 && u < 1.0 ? score_function(dist, u) : 0.0; }, g / 4.0,
        (g + 1) / 4.0, 1e-12, &error);
    if (!std::isfinite(value) || error > 1e-9) {
      throw InputError("quadrature of the score function failed on band " + std::to_string(g + 1) +
                       " for " + distribution_name(dist));
    }
    out[g] = value;
  }
  return out;
}

Vec4 band_integrals_closed_form(const ScoreDistribution& dist) {
  Vec4 out{};
  for (int g = 0; g < 4; ++g) {
    out[g] = density(dist, quantile(dist, g / 4.0)) - density(dist, quantile(dist, (g + 1) / 4.0));
  }
  return out;
}

Mat4 limiting_covariance(double lambda) {
  const double c = lambda * (1.0 - lambda) / 16.0;
  Mat4 s{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s[i][j] = (i == j) ? 3.0 * c : -c;
  return s;
}

ScoreModel band_scores(const ScoreDistribution& dist, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("sampling fraction must lie in (0, 1)");
  ScoreModel model;
  model.distribution = dist;
  model.lambda = lambda;
  const Vec4 bands = band_integrals_quadrature(dist);
  for (int g = 0; g < 4; ++g) model.eta[g] = lambda * (1.0 - lambda) * bands[g];
  model.Sigma = limiting_covariance(lambda);
  model.Sigma_ginv = zero_first_ginv(model.Sigma);

  Vec4 w = mul(model.Sigma_ginv, model.eta);
  const double base = w[0];
  double biggest = 0.0;
  for (double& v : w) {
    v -= base;
    biggest = std::max(biggest, std::abs(v));
  }
  const double scale = std::abs(w[3]) > 1e-12 * biggest ? w[3] : biggest;
  for (double& v : w) {
    v = scale > 0.0 ? v / scale : 0.0;
    if (std::abs(v) < 1e-12) v = 0.0;
  }
  model.optimal_w = w;
  return model;
}

double noncentrality(const Vec4& w, const ScoreModel& model, double delta) {
  const double var = quad_form(model.Sigma, w);
  if (!(var > 0.0)) throw InputError("weights have zero limiting variance");
  return delta * dot(w, model.eta) / std::sqrt(var);
}

double relative_efficiency(const Vec4& w1, const Vec4& w2, const ScoreModel& model) {
  const double e2 = noncentrality(w2, model, 1.0);
  if (e2 == 0.0) throw InputError("reference weights have zero noncentrality");
  const double ratio = noncentrality(w1, model, 1.0) / e2;
  return ratio * ratio;
}

}  // namespace qshift

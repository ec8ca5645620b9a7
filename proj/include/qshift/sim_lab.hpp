#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qshift/inference_types.hpp"

namespace qshift {

enum class Sampler { Normal, Cauchy, NormalPlusExponential };

std::string sampler_name(Sampler s);
Sampler parse_sampler(const std::string& text);

// 64-bit Mersenne Twister with portable transforms on top of the raw bits,
// so streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();  // in (0, 1)
  double normal();
  double exponential();
  double cauchy();

  static std::string name();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

// Per-replication seed from (master seed, replication index).
std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index);

std::vector<double> sample(Sampler spec, std::size_t count, Rng& rng);

enum class Estimator { HL, Mood, Mert, Gmm };

std::string estimator_name(Estimator e);
Estimator parse_estimator(const std::string& text);

struct SimulationConfig {
  Sampler sampler = Sampler::Normal;
  int n = 24;  // treated
  int m = 24;  // control
  int reps = 1000;
  std::uint64_t seed = 1;
  std::vector<Estimator> estimators{Estimator::HL, Estimator::Mood, Estimator::Mert,
                                    Estimator::Gmm};
  double true_delta = 0.0;
  double alpha = 0.05;
  // Overrides of the default interval mode per estimator. By default rank
  // intervals are exact when min(n, m) < 80 and asymptotic otherwise; GMM
  // intervals are always asymptotic.
  std::map<Estimator, Mode> ci_mode;
  int threads = 1;
};

// Throws InputError for an invalid configuration.
void validate(const SimulationConfig& config);
Mode effective_ci_mode(const SimulationConfig& config, Estimator e);

struct Rate {
  double value = 0.0;     // percent
  double std_error = 0.0; // percent
};

struct EstimatorSummary {
  Estimator estimator = Estimator::HL;
  Mode ci_mode = Mode::Asymptotic;
  int successes = 0;
  int failures = 0;
  Rate failure_rate;
  double mse = 0.0;
  double mse_std_error = 0.0;
  double bias = 0.0;
  Rate coverage;      // of the shortest closed interval containing the set
  Rate set_coverage;  // of the set itself
  double mean_ci_length = 0.0;  // over bounded sets
  int unbounded_sets = 0;
  std::optional<double> attained_level;  // exact rank intervals
};

struct GmmDiagnostics {
  Rate interval_fraction;
  double mean_min_g2 = 0.0;
  double mean_min_g2_std_error = 0.0;
  Rate overid_reject_rate;  // chi-square(2) p-value < 0.05
  Rate ambiguity_rate;
};

struct SimulationReport {
  SimulationConfig config;
  std::vector<EstimatorSummary> summaries;
  // "gmm:X" -> MSE(X) / MSE(GMM)
  std::map<std::string, double> mse_ratios;
  std::optional<GmmDiagnostics> gmm;
  std::string rng_name;
  std::string software_version;
  std::vector<std::string> warnings;

  const EstimatorSummary& summary(Estimator e) const;
};

// Pure function of the configuration; the thread count only changes speed.
SimulationReport run_simulation(const SimulationConfig& config);

}  // namespace qshift

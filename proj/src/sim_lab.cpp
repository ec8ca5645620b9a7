#include "qshift/sim_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <numbers>
#include <mutex>
#include <thread>

#include "qshift/chi_square.hpp"
#include "qshift/errors.hpp"
#include "qshift/gmm_inference.hpp"
#include "qshift/rank_inference.hpp"
#include "qshift/version.hpp"

namespace qshift {

namespace {

struct EstimatorOutcome {
  bool ok = false;
  double estimate = 0.0;
  bool covered = false;      // enclosing interval
  bool set_covered = false;
  double length = 0.0;
  bool is_interval = true;
};

struct ReplicationOutcome {
  std::vector<EstimatorOutcome> per_estimator;
  double min_g2 = 0.0;
  double overid_p = 1.0;
  bool ambiguous = false;
};

bool is_rank(Estimator e) { return e != Estimator::Gmm; }

WeightVector rank_weights(Estimator e) {
  switch (e) {
    case Estimator::HL:
      return preset_weights(WeightPreset::HL);
    case Estimator::Mood:
      return preset_weights(WeightPreset::Mood);
    case Estimator::Mert:
      return preset_weights(WeightPreset::Mert);
    case Estimator::Gmm:
      break;
  }
  throw InternalError("GMM has no fixed weights");
}

Rate percent_rate(int hits, int trials) {
  if (trials == 0) return {};
  const double p = double(hits) / trials;
  return {100.0 * p, 100.0 * std::sqrt(p * (1.0 - p) / trials)};
}

}  // namespace

std::string sampler_name(Sampler s) {
  switch (s) {
    case Sampler::Normal:
      return "normal";
    case Sampler::Cauchy:
      return "cauchy";
    case Sampler::NormalPlusExponential:
      return "ne";
  }
  return "?";
}

Sampler parse_sampler(const std::string& text) {
  if (text == "normal" || text == "n") return Sampler::Normal;
  if (text == "cauchy" || text == "c") return Sampler::Cauchy;
  if (text == "ne" || text == "normal+exponential") return Sampler::NormalPlusExponential;
  throw InputError("unknown sampler '" + text + "' (expected normal, cauchy or ne)");
}

double Rng::uniform() {
  // 53 random bits, centred in their cell so 0 and 1 never occur.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  // Marsaglia polar method.
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  return u * f;
}

double Rng::exponential() { return -std::log(uniform()); }

double Rng::cauchy() { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

std::string Rng::name() { return "mt19937_64 (std::mersenne_twister_engine, 64-bit) + polar Normal"; }

std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl step.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<double> sample(Sampler spec, std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  for (auto& v : out) {
    switch (spec) {
      case Sampler::Normal:
        v = rng.normal();
        break;
      case Sampler::Cauchy:
        v = rng.cauchy();
        break;
      case Sampler::NormalPlusExponential: {
        const double z = rng.normal();
        v = z + rng.exponential();
        break;
      }
    }
  }
  return out;
}

std::string estimator_name(Estimator e) {
  switch (e) {
    case Estimator::HL:
      return "HL";
    case Estimator::Mood:
      return "MOOD";
    case Estimator::Mert:
      return "MERT";
    case Estimator::Gmm:
      return "GMM";
  }
  return "?";
}

Estimator parse_estimator(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "hl") return Estimator::HL;
  if (t == "mood" || t == "m") return Estimator::Mood;
  if (t == "mert") return Estimator::Mert;
  if (t == "gmm") return Estimator::Gmm;
  throw InputError("unknown estimator '" + text + "' (expected hl, mood, mert or gmm)");
}

void validate(const SimulationConfig& config) {
  if (config.reps < 1) throw InputError("reps must be >= 1");
  if (config.n < 1 || config.m < 1 || config.n + config.m < 4) {
    throw InputError("need n, m >= 1 and n + m >= 4");
  }
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  if (!std::isfinite(config.true_delta)) throw InputError("true shift must be finite");
  if (config.estimators.empty()) throw InputError("select at least one estimator");
  if (config.threads < 1) throw InputError("threads must be >= 1");
  const auto gmm = config.ci_mode.find(Estimator::Gmm);
  if (gmm != config.ci_mode.end() && gmm->second == Mode::Exact) {
    throw InputError("GMM intervals have no exact null distribution");
  }
  if (std::find(config.estimators.begin(), config.estimators.end(), Estimator::Gmm) !=
          config.estimators.end() &&
      std::int64_t(config.n) * config.m > 10'000'000) {
    throw BudgetError("GMM breakpoint sweep over more than 1e7 differences per replication");
  }
}

Mode effective_ci_mode(const SimulationConfig& config, Estimator e) {
  const auto it = config.ci_mode.find(e);
  if (it != config.ci_mode.end() && it->second != Mode::Auto) return it->second;
  if (!is_rank(e)) return Mode::Asymptotic;
  const QuartileDesign design = make_design(config.n + config.m, config.n);
  return (std::min(config.n, config.m) < 80 && enumerable(design)) ? Mode::Exact
                                                                   : Mode::Asymptotic;
}

const EstimatorSummary& SimulationReport::summary(Estimator e) const {
  for (const auto& s : summaries) {
    if (s.estimator == e) return s;
  }
  throw InputError("estimator " + estimator_name(e) + " was not simulated");
}

SimulationReport run_simulation(const SimulationConfig& config) {
  validate(config);
  const auto& estimators = config.estimators;
  const std::size_t k = estimators.size();
  const QuartileDesign design = make_design(config.n + config.m, config.n);
  const HypergeomModel model = moments(design);

  std::vector<Mode> modes(k);
  std::vector<std::optional<WeightVector>> weights(k);
  std::vector<std::optional<RankNullDistribution>> null_laws(k);
  for (std::size_t e = 0; e < k; ++e) {
    modes[e] = effective_ci_mode(config, estimators[e]);
    if (is_rank(estimators[e])) {
      weights[e] = rank_weights(estimators[e]);
      if (modes[e] == Mode::Exact) null_laws[e].emplace(model, *weights[e]);
    }
  }
  const bool want_gmm =
      std::find(estimators.begin(), estimators.end(), Estimator::Gmm) != estimators.end();

  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(config.reps));
  auto run_one = [&](std::size_t r) {
    Rng rng(replication_seed(config.seed, r));
    std::vector<double> x = sample(config.sampler, static_cast<std::size_t>(config.m), rng);
    std::vector<double> y = sample(config.sampler, static_cast<std::size_t>(config.n), rng);
    for (double& v : y) v += config.true_delta;
    const TwoSample data(std::move(x), std::move(y));
    const ShiftTrajectory traj = trajectory(data);

    ReplicationOutcome out;
    out.per_estimator.resize(k);
    std::optional<GmmResult> gmm_fit;
    std::vector<double> g2;
    if (want_gmm) {
      g2 = segment_g2(traj, model);
      try {
        gmm_fit = gmm_estimate(traj, g2);
        out.min_g2 = gmm_fit->min_g2;
        out.overid_p = gmm_fit->overid.asymptotic_p;
        out.ambiguous = gmm_fit->ambiguity_flag;
      } catch (const FeasibilityError&) {
      }
    }
    for (std::size_t e = 0; e < k; ++e) {
      EstimatorOutcome& o = out.per_estimator[e];
      try {
        ConfidenceSet set;
        if (is_rank(estimators[e])) {
          o.estimate = hl_estimate(traj, model, *weights[e]).estimate;
          set = invert_rank_test(traj, model, *weights[e], config.alpha, modes[e],
                                 null_laws[e] ? &*null_laws[e] : nullptr);
        } else {
          if (!gmm_fit) continue;
          o.estimate = gmm_fit->estimate.estimate;
          set = gmm_confidence_set(traj, *gmm_fit, g2, config.alpha);
        }
        o.ok = true;
        o.set_covered = set.contains(config.true_delta);
        o.covered = set.enclosing_interval.lo <= config.true_delta &&
                    config.true_delta <= set.enclosing_interval.hi;
        o.length = set.enclosing_interval.length();
        o.is_interval = set.is_interval;
      } catch (const FeasibilityError&) {
        o.ok = false;
      }
    }
    outcomes[r] = std::move(out);
  };

  const int workers = std::min(config.threads, config.reps);
  if (workers <= 1) {
    for (std::size_t r = 0; r < outcomes.size(); ++r) run_one(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < outcomes.size(); r = next++) {
          try {
            run_one(r);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  // Aggregate in replication order.
  SimulationReport report;
  report.config = config;
  report.rng_name = Rng::name();
  report.software_version = kVersion;
  if (want_gmm && config.n > 500 && config.m > 500) {
    report.warnings.push_back("GMM sweeps O(nm) breakpoints per replication; expect long runtimes");
  }

  for (std::size_t e = 0; e < k; ++e) {
    EstimatorSummary s;
    s.estimator = estimators[e];
    s.ci_mode = modes[e];
    if (null_laws[e]) {
      for (const auto& level : null_laws[e]->d2_levels()) {
        if (level.tail <= config.alpha) s.attained_level = 1.0 - level.tail;
      }
    }
    double sum_err = 0.0, sum_sq = 0.0, sum_sq2 = 0.0, sum_len = 0.0;
    int covered = 0, set_covered = 0, bounded = 0;
    for (const auto& rep : outcomes) {
      const auto& o = rep.per_estimator[e];
      if (!o.ok) {
        ++s.failures;
        continue;
      }
      ++s.successes;
      const double err = o.estimate - config.true_delta;
      sum_err += err;
      sum_sq += err * err;
      sum_sq2 += err * err * err * err;
      if (o.covered) ++covered;
      if (o.set_covered) ++set_covered;
      if (std::isfinite(o.length)) {
        sum_len += o.length;
        ++bounded;
      } else {
        ++s.unbounded_sets;
      }
    }
    s.failure_rate = percent_rate(s.failures, config.reps);
    if (s.successes > 0) {
      const double r = s.successes;
      s.mse = sum_sq / r;
      s.bias = sum_err / r;
      const double var_sq = std::max(0.0, sum_sq2 / r - s.mse * s.mse);
      s.mse_std_error = std::sqrt(var_sq / r);
      s.coverage = percent_rate(covered, s.successes);
      s.set_coverage = percent_rate(set_covered, s.successes);
      s.mean_ci_length = bounded > 0 ? sum_len / bounded : 0.0;
    }
    report.summaries.push_back(s);
  }

  if (want_gmm) {
    const std::size_t g =
        std::find(estimators.begin(), estimators.end(), Estimator::Gmm) - estimators.begin();
    GmmDiagnostics d;
    int ok = 0, intervals = 0, rejects = 0, ambiguous = 0;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& rep : outcomes) {
      if (!rep.per_estimator[g].ok) continue;
      ++ok;
      if (rep.per_estimator[g].is_interval) ++intervals;
      if (rep.overid_p < 0.05) ++rejects;
      if (rep.ambiguous) ++ambiguous;
      sum += rep.min_g2;
      sum2 += rep.min_g2 * rep.min_g2;
    }
    d.interval_fraction = percent_rate(intervals, ok);
    d.overid_reject_rate = percent_rate(rejects, ok);
    d.ambiguity_rate = percent_rate(ambiguous, ok);
    if (ok > 0) {
      d.mean_min_g2 = sum / ok;
      d.mean_min_g2_std_error = std::sqrt(std::max(0.0, sum2 / ok - d.mean_min_g2 * d.mean_min_g2) / ok);
    }
    report.gmm = d;

    const double gmm_mse = report.summaries[g].mse;
    for (const auto& s : report.summaries) {
      if (s.estimator == Estimator::Gmm || gmm_mse <= 0.0 || s.successes == 0) continue;
      report.mse_ratios["gmm:" + estimator_name(s.estimator)] = s.mse / gmm_mse;
    }
  }
  return report;
}

}  // namespace qshift

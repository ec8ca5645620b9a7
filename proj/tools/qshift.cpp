#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qshift/errors.hpp"
#include "qshift/report.hpp"
#include "qshift/version.hpp"

using namespace qshift;

namespace {

struct DataFlags {
  std::string x, y, data;
};

void add_data_flags(CLI::App* cmd, DataFlags& f) {
  cmd->add_option("--x", f.x, "control observations, one per line");
  cmd->add_option("--y", f.y, "treated observations, one per line");
  cmd->add_option("--data", f.data, "single file with group and value columns");
}

struct LoadedData {
  TwoSample sample;
  std::string digest;
};

LoadedData load(const DataFlags& f) {
  if (!f.data.empty()) {
    if (!f.x.empty() || !f.y.empty()) throw InputError("use either --data or --x/--y, not both");
    auto [x, y] = read_grouped(f.data);
    return {TwoSample(std::move(x), std::move(y)), input_digest({f.data})};
  }
  if (f.x.empty() || f.y.empty()) throw InputError("need --x and --y (or --data)");
  auto x = read_observations(f.x);
  auto y = read_observations(f.y);
  return {TwoSample(std::move(x), std::move(y)), input_digest({f.x, f.y})};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path + ": cannot open for writing");
  out << text;
  if (!out) throw InputError(path + ": write failed");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class Fn>
void write_stream(const std::string& path, Fn&& fn) {
  std::ostringstream os;
  fn(os);
  write_text(path, os.str());
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quartile-table inference for a two-sample shift"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "estimates, confidence sets and tests for a dataset");
  DataFlags adata;
  std::string amode = "auto", aweights, aout, apcurve, agmm, abox;
  double aalpha = 0.05;
  add_data_flags(analyze, adata);
  analyze->add_option("--mode", amode, "exact, asymptotic or auto");
  analyze->add_option("--alpha", aalpha, "level for the attributable-effects bound");
  analyze->add_option("--weights", aweights, "hl, mood, mert or w1,w2,w3,w4 (default: all presets)");
  analyze->add_option("--out", aout, "JSON report (default: text summary on stdout only)");
  analyze->add_option("--pcurve", apcurve, "CSV of per-segment exact p-values");
  analyze->add_option("--gmm-curve", agmm, "CSV of G2 minus its minimum per segment");
  analyze->add_option("--boxplot-data", abox, "CSV of five-number summaries");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of the estimators");
  SimulationConfig cfg;
  std::string sdist = "normal", sestimators = "hl,mood,mert,gmm", sout;
  std::vector<std::string> sci;
  simulate->add_option("--dist", sdist, "normal, cauchy or ne");
  simulate->add_option("--n", cfg.n, "treated sample size");
  simulate->add_option("--m", cfg.m, "control sample size");
  simulate->add_option("--reps", cfg.reps, "replications");
  simulate->add_option("--seed", cfg.seed, "master seed");
  simulate->add_option("--threads", cfg.threads, "worker threads");
  simulate->add_option("--estimators", sestimators, "comma list of hl, mood, mert, gmm");
  simulate->add_option("--true-delta", cfg.true_delta, "true shift");
  simulate->add_option("--alpha", cfg.alpha, "1 - nominal coverage");
  simulate->add_option("--ci-mode", sci, "estimator=exact|asymptotic|auto, repeatable");
  simulate->add_option("--out", sout, "JSON report (default stdout)");

  // weights
  auto* weights = app.add_subcommand("weights", "optimal group scores and preset efficiencies");
  std::string wdist = "normal,cauchy,ne", wout;
  double lambda = 0.5;
  weights->add_option("--dist", wdist, "comma list of normal, cauchy, ne");
  weights->add_option("--lambda", lambda, "sampling fraction n/N");
  weights->add_option("--out", wout, "JSON output (default stdout)");

  // dist
  auto* dist = app.add_subcommand("dist", "exact null tables");
  DataFlags ddata;
  int dn = 0, dm = 0;
  std::string dstat = "mw", dout, dweights = "hl", dmode = "auto";
  std::optional<std::int64_t> dtail;
  std::optional<double> dat;
  dist->add_option("--n", dn, "treated sample size");
  dist->add_option("--m", dm, "control sample size");
  dist->add_option("--statistic", dstat, "mw, table, g2 or d2");
  dist->add_option("--tail", dtail, "report Pr(V >= value) for mw");
  dist->add_option("--at-delta", dat, "hypothesized shift for g2/d2 (needs data)");
  dist->add_option("--weights", dweights, "weights for d2");
  dist->add_option("--mode", dmode, "exact, asymptotic or auto for g2/d2");
  dist->add_option("--out", dout, "JSON output (default stdout)");
  add_data_flags(dist, ddata);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (analyze->parsed()) {
      const auto loaded = load(adata);
      AnalysisOptions opts;
      opts.mode = parse_mode(amode);
      opts.alpha = aalpha;
      opts.digest = loaded.digest;
      if (!aweights.empty()) opts.methods = {{aweights, parse_weights(aweights)}};
      const auto report = analysis_report(loaded.sample, opts);
      if (!aout.empty()) write_json(aout, report);
      std::cout << render_analysis_text(report);
      if (!apcurve.empty()) {
        const auto w = aweights.empty() ? preset_weights(WeightPreset::HL) : parse_weights(aweights);
        const auto rows = pcurve(loaded.sample, w, opts.mode);
        write_stream(apcurve, [&](std::ostream& os) { write_pcurve_csv(os, rows); });
      }
      if (!agmm.empty()) {
        const auto rows = gmm_curve(loaded.sample);
        write_stream(agmm, [&](std::ostream& os) { write_gmm_curve_csv(os, rows); });
      }
      if (!abox.empty()) {
        const auto box = boxplot_data(loaded.sample);
        write_stream(abox, [&](std::ostream& os) { write_boxplot_csv(os, box); });
      }
    } else if (simulate->parsed()) {
      cfg.sampler = parse_sampler(sdist);
      cfg.estimators.clear();
      for (const auto& e : split(sestimators)) cfg.estimators.push_back(parse_estimator(e));
      for (const auto& item : sci) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("--ci-mode expects estimator=mode, got '" + item + "'");
        cfg.ci_mode[parse_estimator(item.substr(0, eq))] = parse_mode(item.substr(eq + 1));
      }
      const auto report = run_simulation(cfg);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      write_json(sout, simulation_report_json(report));
    } else if (weights->parsed()) {
      std::vector<ScoreDistribution> dists;
      for (const auto& d : split(wdist)) dists.push_back(parse_distribution(d));
      write_json(wout, weights_report(dists, lambda));
    } else if (dist->parsed()) {
      if (dstat == "mw") {
        write_json(dout, mw_table(dn, dm, dtail));
      } else if (dstat == "table") {
        write_json(dout, hypergeom_table(dn, dm));
      } else if (dstat == "g2" || dstat == "d2") {
        if (!dat) throw InputError("--statistic " + dstat + " needs --at-delta");
        const auto loaded = load(ddata);
        if ((dn && dn != loaded.sample.n()) || (dm && dm != loaded.sample.m())) {
          throw InputError("--n/--m disagree with the data");
        }
        const Mode mode = parse_mode(dmode);
        const auto t = dstat == "g2" ? fit_test(loaded.sample, *dat, mode)
                                     : deviate_test(loaded.sample, *dat, parse_weights(dweights), mode);
        json j = to_json(t);
        j["statistic_name"] = dstat;
        j["table"] = build_table(loaded.sample, *dat).a;
        write_json(dout, j);
      } else {
        throw InputError("unknown statistic '" + dstat + "' (expected mw, table, g2 or d2)");
      }
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n  (try --mode asymptotic)\n";
    return 2;
  } catch (const FeasibilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

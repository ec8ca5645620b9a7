#include "qshift/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qshift/chi_square.hpp"
#include "qshift/errors.hpp"
#include "qshift/version.hpp"

namespace qshift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool try_parse_double(const std::string& text, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(text, &used);
    return used == text.size() && std::isfinite(out);
  } catch (const std::exception&) {
    return false;
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  return in;
}

json real_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double real_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  throw InputError("expected a number, got '" + s + "'");
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string rule_name(EstimateRule r) {
  return r == EstimateRule::CrossingPoint ? "crossing-point" : "interval-midpoint";
}

Mode resolve(Mode mode, const QuartileDesign& design) {
  if (mode == Mode::Auto) return enumerable(design) ? Mode::Exact : Mode::Asymptotic;
  return mode;
}

std::string sig6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string p4(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", p);
  return buf;
}

std::string set_text(const json& set) {
  std::string out;
  for (const auto& iv : set["intervals"]) {
    if (!out.empty()) out += " U ";
    out += "[" + sig6(real_from_json(iv[0])) + ", " + sig6(real_from_json(iv[1])) + "]";
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

// ---- input ---------------------------------------------------------------

std::vector<double> read_observations(const std::string& path) {
  auto in = open_input(path);
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    double v = 0.0;
    if (!try_parse_double(t, v)) {
      throw InputError(path + ":" + std::to_string(lineno) + ": cannot parse '" + t +
                       "' as a finite number");
    }
    out.push_back(v);
  }
  if (out.empty()) throw InputError(path + ": no observations");
  return out;
}

std::pair<std::vector<double>, std::vector<double>> read_grouped(const std::string& path) {
  auto in = open_input(path);
  std::vector<double> x, y;
  std::string line;
  int lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::replace(t.begin(), t.end(), '\t', ' ');
    std::stringstream ss(t);
    std::string group, value;
    ss >> group >> value;
    double v = 0.0;
    const bool parsed = !value.empty() && try_parse_double(value, v);
    if (!parsed && first) {
      first = false;  // header
      continue;
    }
    first = false;
    if (!parsed) {
      throw InputError(path + ":" + std::to_string(lineno) + ": cannot parse value '" + value + "'");
    }
    std::string g = group;
    std::transform(g.begin(), g.end(), g.begin(), [](unsigned char c) { return std::tolower(c); });
    if (g == "x" || g == "control" || g == "0") {
      x.push_back(v);
    } else if (g == "y" || g == "treated" || g == "1") {
      y.push_back(v);
    } else {
      throw InputError(path + ":" + std::to_string(lineno) + ": unknown group '" + group +
                       "' (expected x/control/0 or y/treated/1)");
    }
  }
  if (x.empty()) throw InputError(path + ": no control observations");
  if (y.empty()) throw InputError(path + ": no treated observations");
  return {std::move(x), std::move(y)};
}

std::string input_digest(const std::vector<std::string>& paths) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& p : paths) {
    auto in = open_input(p);
    char c;
    while (in.get(c)) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---- analysis ------------------------------------------------------------

FiveNumber five_number_summary(std::vector<double> values) {
  if (values.empty()) throw InputError("five-number summary of an empty sample");
  std::sort(values.begin(), values.end());
  auto q = [&](double p) {
    const double h = p * (values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - lo) * (values[hi] - values[lo]);
  };
  return {{values.front(), q(0.25), q(0.5), q(0.75), values.back()}};
}

json to_json(const Interval& iv) { return json::array({real_json(iv.lo), real_json(iv.hi)}); }

Interval interval_from_json(const json& j) { return {real_from_json(j.at(0)), real_from_json(j.at(1))}; }

json to_json(const ConfidenceSet& set) {
  json intervals = json::array();
  for (const auto& iv : set.intervals) intervals.push_back(to_json(iv));
  return {{"intervals", intervals},
          {"nominal_level", set.nominal_level},
          {"attained_level", optional_json(set.attained_level)},
          {"is_interval", set.is_interval},
          {"enclosing_interval", to_json(set.enclosing_interval)},
          {"unattainable", set.unattainable}};
}

ConfidenceSet confidence_set_from_json(const json& j) {
  ConfidenceSet set;
  for (const auto& iv : j.at("intervals")) set.intervals.push_back(interval_from_json(iv));
  set.nominal_level = j.at("nominal_level").get<double>();
  if (!j.at("attained_level").is_null()) set.attained_level = j.at("attained_level").get<double>();
  set.is_interval = j.at("is_interval").get<bool>();
  set.enclosing_interval = interval_from_json(j.at("enclosing_interval"));
  set.unattainable = j.at("unattainable").get<bool>();
  return set;
}

json to_json(const TestResult& t) {
  return {{"statistic", t.statistic},
          {"exact_p", optional_json(t.exact_p)},
          {"asymptotic_p", t.asymptotic_p},
          {"reference", t.reference == Reference::ChiSquare ? "chi-square" : "standard-normal"},
          {"df", t.df},
          {"delta0", real_json(t.delta0)}};
}

json to_json(const EstimateResult& e) {
  return {{"estimate", e.estimate},
          {"defining_interval", to_json(e.defining_interval)},
          {"upper_open", e.upper_open},
          {"rule", rule_name(e.rule)}};
}

json analysis_report(const TwoSample& data, const AnalysisOptions& options) {
  const auto traj = trajectory(data);
  const auto model = moments(data.design());
  const Mode mode = resolve(options.mode, data.design());

  json report;
  report["software"] = {{"name", "qshift"}, {"version", kVersion}};
  report["input_digest"] = options.digest;
  const auto sx = five_number_summary(data.x());
  const auto sy = five_number_summary(data.y());
  report["dataset"] = {{"n", data.n()},
                       {"m", data.m()},
                       {"N", data.N()},
                       {"x_summary", sx.v},
                       {"y_summary", sy.v},
                       {"has_ties", data.has_ties()}};
  report["design"] = {{"q", data.design().q}, {"k", data.design().k}};

  json methods = json::array();
  for (const auto& method : options.methods) {
    const auto& w = method.weights;
    const auto est = hl_estimate(traj, model, w);
    json sets = json::array();
    std::optional<RankNullDistribution> law;
    if (mode == Mode::Exact) law.emplace(model, w);
    for (double level : options.levels) {
      const auto set = invert_rank_test(traj, model, w, 1.0 - level, mode, law ? &*law : nullptr);
      sets.push_back({{"level", level}, {"set", to_json(set)}});
    }
    json d2min = json::array();
    for (const auto& iv : d2_minimizing_intervals(traj, model, w)) d2min.push_back(to_json(iv));
    const auto a = traj.table_at(est.estimate);
    methods.push_back({{"name", method.name},
                       {"weights", w.values()},
                       {"expected_T", dot(w.values(), model.E)},
                       {"variance_T", quad_form(model.V, w.values())},
                       {"estimate", to_json(est)},
                       {"table_at_estimate", a.a},
                       {"d2_minimizing_intervals", d2min},
                       {"deviate_at_estimate", to_json(deviate_test(model, a.as_vec(), w, mode, est.estimate))},
                       {"fit_at_estimate", to_json(fit_test(model, a.as_vec(), mode, est.estimate))},
                       {"confidence_sets", sets},
                       {"mode", to_string(mode)}});
  }
  report["methods"] = methods;

  const auto g2 = segment_g2(traj, model);
  json gmm;
  try {
    const auto fit = gmm_estimate(traj, g2);
    json segs = json::array();
    for (const auto& iv : fit.minimizing_segments) segs.push_back(to_json(iv));
    json sets = json::array();
    for (double level : options.levels) {
      sets.push_back({{"level", level}, {"set", to_json(gmm_confidence_set(traj, fit, g2, 1.0 - level))}});
    }
    const auto a = traj.table_at(fit.estimate.estimate);
    gmm = {{"estimate", to_json(fit.estimate)},
           {"min_g2", fit.min_g2},
           {"minimizing_segments", segs},
           {"ambiguity_flag", fit.ambiguity_flag},
           {"overid", to_json(fit.overid)},
           {"table_at_estimate", a.a},
           {"fit_at_estimate", to_json(fit_test(model, a.as_vec(), mode, fit.estimate.estimate))},
           {"confidence_sets", sets},
           {"mode", "asymptotic"}};
  } catch (const FeasibilityError& e) {
    gmm = {{"error", e.what()}};
  }
  report["gmm"] = gmm;

  const auto attr = attributable_bound(data, options.alpha);
  report["attributable"] = {{"alpha", options.alpha},
                            {"v_observed", attr.v_observed},
                            {"total_pairs", attr.total_pairs},
                            {"critical_value", attr.critical_value},
                            {"attained_confidence", attr.attained_confidence},
                            {"lower_bound", attr.lower_bound},
                            {"unattainable", attr.unattainable}};

  report["metadata"] = {
      {"tie_rule",
       "a treated value tied with a control value after shifting is ordered below it; "
       "tables are right-continuous in the shift"},
      {"tie_tolerance", data.tie_tolerance()},
      {"ties_present", data.has_ties()},
      {"exactness_caveat",
       data.has_ties() ? "data contain ties; exact null laws assume continuous responses" : ""},
      {"mode", to_string(mode)},
      {"sensitivity_analysis",
       "not computed; it would extend the attributable block to non-random assignment"}};
  return report;
}

std::string render_analysis_text(const json& r) {
  std::ostringstream os;
  const auto& d = r["dataset"];
  os << "qshift " << r["software"]["version"].get<std::string>() << "  input "
     << r["input_digest"].get<std::string>() << "\n";
  os << "n = " << d["n"] << " treated, m = " << d["m"] << " control\n";
  auto five = [&](const json& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : " ") + sig6(e.get<double>());
    return s;
  };
  os << "  x five-number: " << five(d["x_summary"]) << "\n";
  os << "  y five-number: " << five(d["y_summary"]) << "\n";
  if (d["has_ties"].get<bool>()) os << "  note: data contain ties\n";

  for (const auto& m : r["methods"]) {
    const auto& e = m["estimate"];
    os << "\n" << m["name"].get<std::string>() << " (" << m["mode"].get<std::string>() << ")\n";
    os << "  estimate " << sig6(e["estimate"].get<double>()) << "  ["
       << e["rule"].get<std::string>() << "]\n";
    const auto& fit = m["fit_at_estimate"];
    os << "  G2 at estimate " << sig6(fit["statistic"].get<double>()) << "  p "
       << p4(fit["exact_p"].is_null() ? fit["asymptotic_p"].get<double>() : fit["exact_p"].get<double>())
       << "\n";
    for (const auto& s : m["confidence_sets"]) {
      const auto& set = s["set"];
      os << "  " << sig6(100.0 * s["level"].get<double>()) << "% set ";
      if (!set["attained_level"].is_null()) {
        os << "(attained " << sig6(100.0 * set["attained_level"].get<double>()) << "%) ";
      }
      os << set_text(set) << "\n";
    }
  }

  const auto& g = r["gmm"];
  os << "\nGMM (asymptotic)\n";
  if (g.contains("error")) {
    os << "  " << g["error"].get<std::string>() << "\n";
  } else {
    os << "  estimate " << sig6(g["estimate"]["estimate"].get<double>()) << "  min G2 "
       << sig6(g["min_g2"].get<double>()) << " on "
       << set_text(json{{"intervals", g["minimizing_segments"]}}) << "\n";
    os << "  overidentification p (chi2, 2 df) " << p4(g["overid"]["asymptotic_p"].get<double>())
       << "\n";
    for (const auto& s : g["confidence_sets"]) {
      const auto& set = s["set"];
      os << "  " << sig6(100.0 * s["level"].get<double>()) << "% set " << set_text(set)
         << "  enclosing " << set_text(json{{"intervals", json::array({set["enclosing_interval"]})}})
         << "\n";
    }
  }

  const auto& a = r["attributable"];
  os << "\nAttributable effects\n";
  os << "  V = " << a["v_observed"] << " of " << a["total_pairs"] << ", critical "
     << a["critical_value"] << ", confidence " << sig6(100.0 * a["attained_confidence"].get<double>())
     << "%, at least " << a["lower_bound"] << " comparisons attributable\n";
  return os.str();
}

// ---- figure data ---------------------------------------------------------

std::vector<PCurveRecord> pcurve(const TwoSample& data, const WeightVector& w, Mode mode) {
  const auto traj = trajectory(data);
  const auto model = moments(data.design());
  const Mode m = resolve(mode, data.design());
  std::optional<RankNullDistribution> rank_law;
  std::optional<FitNullDistribution> fit_law;
  if (m == Mode::Exact) {
    rank_law.emplace(model, w);
    fit_law.emplace(model);
  }
  std::vector<PCurveRecord> rows;
  rows.reserve(traj.size());
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const Vec4 a = traj.segments()[s].as_vec();
    const double d2 = d2_statistic(model, a, w);
    const double g2 = g2_statistic(model, a);
    PCurveRecord r;
    r.delta = traj.segment_bounds(s);
    r.p_d2 = rank_law ? rank_law->d2_tail(d2) : chi_square_sf(d2, 1);
    r.p_g2 = fit_law ? fit_law->tail(g2) : chi_square_sf(g2, 3);
    rows.push_back(r);
  }
  return rows;
}

std::vector<GmmCurveRecord> gmm_curve(const TwoSample& data) {
  const auto traj = trajectory(data);
  const auto model = moments(data.design());
  const auto g2 = segment_g2(traj, model);
  const double best = *std::min_element(g2.begin(), g2.end());
  std::vector<GmmCurveRecord> rows;
  rows.reserve(traj.size());
  for (std::size_t s = 0; s < traj.size(); ++s) rows.push_back({traj.segment_bounds(s), g2[s] - best});
  return rows;
}

BoxplotData boxplot_data(const TwoSample& data) {
  BoxplotData box;
  box.hl = hl_estimate(data, preset_weights(WeightPreset::HL)).estimate;
  box.gmm = gmm_estimate(data).estimate.estimate;
  auto shifted = [&](double d) {
    std::vector<double> v = data.y();
    for (double& e : v) e -= d;
    return v;
  };
  box.control = five_number_summary(data.x());
  box.treated_minus_hl = five_number_summary(shifted(box.hl));
  box.treated_minus_gmm = five_number_summary(shifted(box.gmm));
  return box;
}

std::string format_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_real(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  if (!try_parse_double(t, v)) throw InputError("cannot parse '" + t + "' as a number");
  return v;
}

void write_pcurve_csv(std::ostream& os, const std::vector<PCurveRecord>& rows) {
  os << "delta_lo,delta_hi,p_d2,p_g2\n";
  for (const auto& r : rows) {
    os << format_real(r.delta.lo) << ',' << format_real(r.delta.hi) << ',' << format_real(r.p_d2)
       << ',' << format_real(r.p_g2) << '\n';
  }
}

void write_gmm_curve_csv(std::ostream& os, const std::vector<GmmCurveRecord>& rows) {
  os << "delta_lo,delta_hi,g2_minus_min\n";
  for (const auto& r : rows) {
    os << format_real(r.delta.lo) << ',' << format_real(r.delta.hi) << ',' << format_real(r.excess)
       << '\n';
  }
}

void write_boxplot_csv(std::ostream& os, const BoxplotData& box) {
  os << "series,shift,min,q1,median,q3,max\n";
  auto row = [&](const char* name, double shift, const FiveNumber& f) {
    os << name << ',' << format_real(shift);
    for (double v : f.v) os << ',' << format_real(v);
    os << '\n';
  };
  row("x", 0.0, box.control);
  row("y_minus_hl", box.hl, box.treated_minus_hl);
  row("y_minus_gmm", box.gmm, box.treated_minus_gmm);
}

std::vector<PCurveRecord> read_pcurve_csv(std::istream& is) {
  std::vector<PCurveRecord> rows;
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 4) throw InputError("p-curve row needs 4 fields: '" + line + "'");
    rows.push_back({{parse_real(f[0]), parse_real(f[1])}, parse_real(f[2]), parse_real(f[3])});
  }
  return rows;
}

std::vector<GmmCurveRecord> read_gmm_curve_csv(std::istream& is) {
  std::vector<GmmCurveRecord> rows;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 3) throw InputError("GMM-curve row needs 3 fields: '" + line + "'");
    rows.push_back({{parse_real(f[0]), parse_real(f[1])}, parse_real(f[2])});
  }
  return rows;
}

BoxplotData read_boxplot_csv(std::istream& is) {
  BoxplotData box;
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw InputError("boxplot row needs 7 fields: '" + line + "'");
    FiveNumber five;
    for (int i = 0; i < 5; ++i) five.v[i] = parse_real(f[2 + i]);
    if (f[0] == "x") {
      box.control = five;
    } else if (f[0] == "y_minus_hl") {
      box.treated_minus_hl = five;
      box.hl = parse_real(f[1]);
    } else if (f[0] == "y_minus_gmm") {
      box.treated_minus_gmm = five;
      box.gmm = parse_real(f[1]);
    } else {
      throw InputError("unknown boxplot series '" + f[0] + "'");
    }
  }
  return box;
}

// ---- simulation ----------------------------------------------------------

namespace {

json rate_json(const Rate& r) { return {{"percent", r.value}, {"std_error", r.std_error}}; }
Rate rate_from_json(const json& j) {
  return {j.at("percent").get<double>(), j.at("std_error").get<double>()};
}

}  // namespace

json simulation_report_json(const SimulationReport& report) {
  const auto& c = report.config;
  json estimators = json::array();
  json modes = json::object();
  for (auto e : c.estimators) {
    estimators.push_back(estimator_name(e));
    modes[estimator_name(e)] = to_string(effective_ci_mode(c, e));
  }
  // Worker count is deliberately absent: output must not depend on it.
  json j;
  j["config"] = {{"sampler", sampler_name(c.sampler)},
                 {"n", c.n},
                 {"m", c.m},
                 {"reps", c.reps},
                 {"seed", c.seed},
                 {"estimators", estimators},
                 {"true_delta", c.true_delta},
                 {"alpha", c.alpha},
                 {"ci_modes", modes}};
  json summaries = json::array();
  for (const auto& s : report.summaries) {
    summaries.push_back({{"estimator", estimator_name(s.estimator)},
                         {"ci_mode", to_string(s.ci_mode)},
                         {"successes", s.successes},
                         {"failures", s.failures},
                         {"failure_rate", rate_json(s.failure_rate)},
                         {"mse", s.mse},
                         {"mse_std_error", s.mse_std_error},
                         {"bias", s.bias},
                         {"coverage", rate_json(s.coverage)},
                         {"set_coverage", rate_json(s.set_coverage)},
                         {"mean_ci_length", s.mean_ci_length},
                         {"unbounded_sets", s.unbounded_sets},
                         {"attained_level", optional_json(s.attained_level)}});
  }
  j["summaries"] = summaries;
  j["mse_ratios"] = report.mse_ratios;
  if (report.gmm) {
    const auto& g = *report.gmm;
    j["gmm"] = {{"interval_fraction", rate_json(g.interval_fraction)},
                {"mean_min_g2", g.mean_min_g2},
                {"mean_min_g2_std_error", g.mean_min_g2_std_error},
                {"overid_reject_rate", rate_json(g.overid_reject_rate)},
                {"ambiguity_rate", rate_json(g.ambiguity_rate)}};
  } else {
    j["gmm"] = nullptr;
  }
  j["rng"] = report.rng_name;
  j["software_version"] = report.software_version;
  j["warnings"] = report.warnings;
  return j;
}

SimulationReport simulation_report_from_json(const json& j) {
  SimulationReport r;
  const auto& c = j.at("config");
  r.config.sampler = parse_sampler(c.at("sampler").get<std::string>());
  r.config.n = c.at("n").get<int>();
  r.config.m = c.at("m").get<int>();
  r.config.reps = c.at("reps").get<int>();
  r.config.seed = c.at("seed").get<std::uint64_t>();
  r.config.estimators.clear();
  for (const auto& e : c.at("estimators")) r.config.estimators.push_back(parse_estimator(e.get<std::string>()));
  r.config.true_delta = c.at("true_delta").get<double>();
  r.config.alpha = c.at("alpha").get<double>();
  for (const auto& [name, mode] : c.at("ci_modes").items()) {
    r.config.ci_mode[parse_estimator(name)] = parse_mode(mode.get<std::string>());
  }
  for (const auto& s : j.at("summaries")) {
    EstimatorSummary e;
    e.estimator = parse_estimator(s.at("estimator").get<std::string>());
    e.ci_mode = parse_mode(s.at("ci_mode").get<std::string>());
    e.successes = s.at("successes").get<int>();
    e.failures = s.at("failures").get<int>();
    e.failure_rate = rate_from_json(s.at("failure_rate"));
    e.mse = s.at("mse").get<double>();
    e.mse_std_error = s.at("mse_std_error").get<double>();
    e.bias = s.at("bias").get<double>();
    e.coverage = rate_from_json(s.at("coverage"));
    e.set_coverage = rate_from_json(s.at("set_coverage"));
    e.mean_ci_length = s.at("mean_ci_length").get<double>();
    e.unbounded_sets = s.at("unbounded_sets").get<int>();
    if (!s.at("attained_level").is_null()) e.attained_level = s.at("attained_level").get<double>();
    r.summaries.push_back(e);
  }
  r.mse_ratios = j.at("mse_ratios").get<std::map<std::string, double>>();
  if (!j.at("gmm").is_null()) {
    const auto& g = j.at("gmm");
    GmmDiagnostics d;
    d.interval_fraction = rate_from_json(g.at("interval_fraction"));
    d.mean_min_g2 = g.at("mean_min_g2").get<double>();
    d.mean_min_g2_std_error = g.at("mean_min_g2_std_error").get<double>();
    d.overid_reject_rate = rate_from_json(g.at("overid_reject_rate"));
    d.ambiguity_rate = rate_from_json(g.at("ambiguity_rate"));
    r.gmm = d;
  }
  r.rng_name = j.at("rng").get<std::string>();
  r.software_version = j.at("software_version").get<std::string>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

// ---- weights and null tables ---------------------------------------------

json weights_report(const std::vector<ScoreDistribution>& dists, double lambda) {
  const std::vector<WeightPreset> presets{WeightPreset::HL, WeightPreset::Mood, WeightPreset::Mert};
  json out;
  out["lambda"] = lambda;
  json per = json::array();
  std::map<std::string, double> min_eff;
  for (const auto& dist : dists) {
    const auto model = band_scores(dist, lambda);
    json eff;
    for (auto p : presets) {
      const double e = relative_efficiency(preset_weights(p).values(), model.optimal_w, model);
      eff[preset_name(p)] = e;
      auto [it, inserted] = min_eff.emplace(preset_name(p), e);
      if (!inserted) it->second = std::min(it->second, e);
    }
    Vec4 closed = band_integrals_closed_form(dist);
    for (double& v : closed) v *= lambda * (1.0 - lambda);
    per.push_back({{"distribution", distribution_name(dist)},
                   {"eta", model.eta},
                   {"eta_closed_form", closed},
                   {"Sigma", model.Sigma},
                   {"Sigma_ginv", model.Sigma_ginv},
                   {"optimal_w", model.optimal_w},
                   {"optimal_efficacy", noncentrality(model.optimal_w, model, 1.0)},
                   {"efficiency_vs_optimal", eff}});
  }
  out["distributions"] = per;
  out["min_efficiency"] = min_eff;
  return out;
}

json mw_table(int n, int m, std::optional<std::int64_t> tail_at) {
  const auto dist = mw_null_distribution(n, m);
  json rows = json::array();
  double upper = 1.0;
  for (std::size_t v = 0; v < dist.pmf.size(); ++v) {
    rows.push_back({{"v", v}, {"pmf", dist.pmf[v]}, {"upper_tail", std::min(1.0, upper)}});
    upper -= dist.pmf[v];
  }
  json out{{"statistic", "mw"}, {"n", n}, {"m", m}, {"table", rows}};
  if (tail_at) out["tail"] = {{"v", *tail_at}, {"upper_tail", dist.upper_tail(*tail_at)}};
  return out;
}

json hypergeom_table(int n, int m) {
  const auto design = make_design(n + m, n);
  json rows = json::array();
  for (const auto& p : enumerate_support(design)) {
    rows.push_back({{"a", p.counts.a}, {"pmf", p.probability}});
  }
  return {{"statistic", "table"},
          {"n", n},
          {"m", m},
          {"q", design.q},
          {"k", design.k},
          {"count", rows.size()},
          {"table", rows}};
}

}  // namespace qshift

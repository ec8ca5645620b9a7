#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qshift/asymptotic_weights.hpp"
#include "qshift/attributable.hpp"
#include "qshift/gmm_inference.hpp"
#include "qshift/rank_inference.hpp"
#include "qshift/sim_lab.hpp"

namespace qshift {

using json = nlohmann::json;

// ---- input ---------------------------------------------------------------

// One observation per line; blank lines and lines starting with '#' are
// skipped. Errors name the file and line.
std::vector<double> read_observations(const std::string& path);

// Delimited file (comma, tab or whitespace) with a group column and a value
// column. Groups x/control/0 and y/treated/1; an optional header line is
// skipped. Returns {x, y}.
std::pair<std::vector<double>, std::vector<double>> read_grouped(const std::string& path);

// FNV-1a 64-bit digest of the given files' bytes, hex encoded.
std::string input_digest(const std::vector<std::string>& paths);

// ---- analysis ------------------------------------------------------------

struct FiveNumber {
  std::array<double, 5> v{};  // min, Q1, median, Q3, max (linear interpolation)
};
FiveNumber five_number_summary(std::vector<double> values);

struct AnalysisMethod {
  std::string name;
  WeightVector weights;
};

struct AnalysisOptions {
  Mode mode = Mode::Auto;
  double alpha = 0.05;  // attributable-effects bound
  std::vector<AnalysisMethod> methods{{"HL", preset_weights(WeightPreset::HL)},
                                      {"MOOD", preset_weights(WeightPreset::Mood)},
                                      {"MERT", preset_weights(WeightPreset::Mert)}};
  std::vector<double> levels{2.0 / 3.0, 0.90, 0.95};
  std::string digest;
};

json analysis_report(const TwoSample& data, const AnalysisOptions& options);

// Plain-text rendering: reals to 6 significant digits, p-values to 4 decimals.
std::string render_analysis_text(const json& report);

// ---- figure data ---------------------------------------------------------

struct PCurveRecord {
  Interval delta;
  double p_d2 = 1.0;
  double p_g2 = 1.0;
};
// Per trajectory segment: p-values of the D² and G² tests.
std::vector<PCurveRecord> pcurve(const TwoSample& data, const WeightVector& w, Mode mode);

struct GmmCurveRecord {
  Interval delta;
  double excess = 0.0;  // G²_Δ - min G²
};
std::vector<GmmCurveRecord> gmm_curve(const TwoSample& data);

struct BoxplotData {
  FiveNumber control;
  FiveNumber treated_minus_hl;
  FiveNumber treated_minus_gmm;
  double hl = 0.0;
  double gmm = 0.0;
};
BoxplotData boxplot_data(const TwoSample& data);

// CSV with a header row; reals use 12 significant digits, infinities "-inf"/"inf".
void write_pcurve_csv(std::ostream& os, const std::vector<PCurveRecord>& rows);
void write_gmm_curve_csv(std::ostream& os, const std::vector<GmmCurveRecord>& rows);
void write_boxplot_csv(std::ostream& os, const BoxplotData& box);
std::vector<PCurveRecord> read_pcurve_csv(std::istream& is);
std::vector<GmmCurveRecord> read_gmm_curve_csv(std::istream& is);
BoxplotData read_boxplot_csv(std::istream& is);

std::string format_real(double v);  // 12 significant digits, inf-aware
double parse_real(const std::string& text);

// ---- JSON conversions ----------------------------------------------------

json to_json(const Interval& iv);
Interval interval_from_json(const json& j);
json to_json(const ConfidenceSet& set);
ConfidenceSet confidence_set_from_json(const json& j);
json to_json(const TestResult& t);
json to_json(const EstimateResult& e);

json simulation_report_json(const SimulationReport& report);
SimulationReport simulation_report_from_json(const json& j);

// η, Σ, optimal weights, and preset efficiencies for each distribution.
json weights_report(const std::vector<ScoreDistribution>& dists, double lambda);

// Exact null tables.
json mw_table(int n, int m, std::optional<std::int64_t> tail_at);
json hypergeom_table(int n, int m);

}  // namespace qshift

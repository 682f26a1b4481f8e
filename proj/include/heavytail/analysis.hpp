#pragma once

// End-to-end pipeline: records -> three series -> tail fits, rank-size fit,
// bootstrap goodness of fit and concentration measures, plus plot data.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "heavytail/concentration.hpp"
#include "heavytail/gof.hpp"
#include "heavytail/ingest.hpp"
#include "heavytail/tailfit.hpp"

namespace heavytail::analysis {

inline constexpr int kSchemaVersion = 1;
/// Population fractions reported in the top-share table.
inline constexpr double kTopFractions[] = {0.01, 0.05, 0.10, 0.20};

struct AnalysisConfig {
  std::string input_label;  // echoed in the report
  char delimiter = ',';
  double floor = ingest::kDefaultFloor;
  double cutoff = tailfit::kDefaultCutoff;  // standard deviations
  std::size_t replicates = gof::kDefaultReplicates;
  std::size_t top_k = tailfit::kDefaultTopK;
  std::uint64_t seed = 0;
  gof::RefitMode refit = gof::RefitMode::fixed;
  unsigned workers = 0;  // does not influence any reported number
  double bidder_anchor = 1.0;
};

struct ShareRow {
  double fraction = 0.0;
  double share = 0.0;
};

struct SeriesReport {
  std::string name;
  std::size_t n = 0;
  double scale = 1.0;  // standard deviation used for standardization
  double cutoff = 0.0;  // on the analysed (standardized) axis
  std::size_t n_tail = 0;
  tailfit::TailFit tested_fit;  // the model handed to the bootstrap
  std::vector<tailfit::TailFit> fits;
  std::optional<tailfit::ZipfFit> zipf;
  std::size_t zipf_top_k_requested = 0;
  gof::BootstrapReport bootstrap;
  double gini = 0.0;
  std::vector<ShareRow> top_shares;
  double pareto_rule_fraction = 0.0;
  std::optional<double> share_at_most_10;  // bidders only: P(b <= 10)
};

struct AnalysisReport {
  AnalysisConfig config;
  ingest::AggregationSummary summary;
  std::vector<ingest::SkippedRow> skipped;
  std::size_t n_records = 0;
  std::string kernel_backend;
  SeriesReport bidders;
  SeriesReport revenues;
  SeriesReport spendings;
};

struct PlotData {
  std::string file_name;
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
};

struct AnalysisResult {
  AnalysisReport report;
  std::vector<PlotData> plots;  // fig1_cdf, fig1_pdf, fig2_cdf, fig2_zipf, fig3_cdf, fig3_zipf
};

/// Runs the whole pipeline in memory. Errors from a series are rethrown with
/// the series name prefixed and the original code kept.
AnalysisResult analyze(const ingest::ParseResult& parsed, const AnalysisConfig& config);

nlohmann::ordered_json to_json(const AnalysisReport& report);

/// Serialized report, two-space indented, trailing newline.
std::string report_text(const AnalysisReport& report);

std::string_view tool_version() noexcept;

}  // namespace heavytail::analysis

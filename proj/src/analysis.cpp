#include "heavytail/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"
#include "heavytail/rng.hpp"

#ifndef HEAVYTAIL_VERSION
#define HEAVYTAIL_VERSION "0.0.0"
#endif

namespace heavytail::analysis {
namespace {

using nlohmann::ordered_json;

// Stream indices for the per-series bootstrap seeds.
constexpr std::uint64_t kBidderStream = 1;
constexpr std::uint64_t kRevenueStream = 2;
constexpr std::uint64_t kSpendingStream = 3;

template <typename F>
auto for_series(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), "series " + name + ": " + e.what());
  }
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> s(v.begin(), v.end());
  std::sort(s.begin(), s.end());
  return s;
}

void fill_concentration(SeriesReport& r, const Sample& s) {
  r.gini = concentration::gini(s.values());
  for (double f : kTopFractions) r.top_shares.push_back({f, concentration::top_share(s, f)});
  r.pareto_rule_fraction = concentration::pareto_rule_check(s);
}

gof::BootstrapOptions bootstrap_options(const AnalysisConfig& c, std::uint64_t stream) {
  gof::BootstrapOptions o;
  o.n_replicates = c.replicates;
  o.seed = derive_seed(c.seed, stream);
  o.mode = c.refit;
  o.workers = c.workers;
  return o;
}

SeriesReport analyze_bidders(const Sample& bidders, const AnalysisConfig& c,
                             std::vector<PlotData>& plots) {
  SeriesReport r;
  r.name = "bidders";
  r.n = bidders.size();
  r.cutoff = c.bidder_anchor;

  const tailfit::TailSelection tail = tailfit::select_tail(bidders, c.bidder_anchor);
  r.n_tail = tail.n_tail();
  r.tested_fit = tailfit::fit_exponential(bidders, c.bidder_anchor);
  r.fits.push_back(r.tested_fit);
  r.fits.push_back(tailfit::fit_exponential(tail.tail_values));

  gof::BootstrapOptions o = bootstrap_options(c, kBidderStream);
  o.lattice = true;
  r.bootstrap = gof::bootstrap_test(tail, r.tested_fit, o);
  fill_concentration(r, bidders);
  const auto at_most_10 = std::count_if(bidders.values().begin(), bidders.values().end(),
                                        [](double b) { return b <= 10.0; });
  r.share_at_most_10 = static_cast<double>(at_most_10) / static_cast<double>(r.n);

  const std::vector<double> sorted = sorted_copy(bidders.values());
  const tailfit::TailCurve curve = tailfit::empirical_tail_distinct(sorted);
  plots.push_back({"fig1_cdf.tsv", "bidders", "tail", curve.x, curve.tail});
  PlotData pdf{"fig1_pdf.tsv", "bidders", "probability", curve.x, {}};
  // Frequencies are differences of the tail at consecutive distinct values.
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    const double next = i + 1 < curve.x.size() ? curve.tail[i + 1] : 0.0;
    pdf.y.push_back(curve.tail[i] - next);
  }
  plots.push_back(std::move(pdf));
  return r;
}

SeriesReport analyze_money(const std::string& name, const Sample& raw,
                           const AnalysisConfig& c, std::uint64_t stream,
                           const std::string& figure, std::vector<PlotData>& plots) {
  SeriesReport r;
  r.name = name;
  r.n = raw.size();
  const ingest::Standardized std_values = ingest::standardize(raw);
  r.scale = std_values.scale;
  r.cutoff = c.cutoff;

  const tailfit::TailSelection tail = tailfit::select_tail(std_values.values, c.cutoff);
  r.n_tail = tail.n_tail();
  r.tested_fit = tailfit::fit_power_mle(tail);
  r.fits.push_back(r.tested_fit);
  r.fits.push_back(tailfit::fit_power_regression(tail));

  // A short series still gets a rank-size fit over everything it has.
  r.zipf_top_k_requested = c.top_k;
  r.zipf = tailfit::fit_zipf(std_values.values, std::min(c.top_k, r.n));

  r.bootstrap = gof::bootstrap_test(tail, r.tested_fit, bootstrap_options(c, stream));
  fill_concentration(r, raw);

  const std::vector<double> sorted = sorted_copy(std_values.values.values());
  const tailfit::TailCurve curve = tailfit::empirical_tail_distinct(sorted);
  plots.push_back({figure + "_cdf.tsv", "standardized_value", "tail", curve.x, curve.tail});
  PlotData zipf{figure + "_zipf.tsv", "rank", "standardized_value", {}, {}};
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    zipf.x.push_back(static_cast<double>(i + 1));
    zipf.y.push_back(sorted[sorted.size() - 1 - i]);
  }
  plots.push_back(std::move(zipf));
  return r;
}

std::string method_name(tailfit::Method m) {
  return m == tailfit::Method::mle ? "mle" : "regression";
}

ordered_json fit_json(const tailfit::TailFit& f) {
  ordered_json j;
  j["family"] = std::string(dist::to_string(f.family));
  j["method"] = method_name(f.method);
  j["exponent"] = f.exponent;
  j["std_error"] = f.std_error;
  j["cutoff"] = f.cutoff;
  j["n_points"] = f.n_points;
  j["r_squared"] = f.r_squared ? ordered_json(*f.r_squared) : ordered_json(nullptr);
  return j;
}

ordered_json bootstrap_json(const gof::BootstrapReport& b) {
  ordered_json j;
  j["observed_ks"] = b.observed_ks;
  j["n_replicates"] = b.n_replicates;
  j["n_at_least_observed"] = b.n_at_least_observed;
  j["p_value"] = b.p_value;
  j["refit_mode"] = std::string(gof::to_string(b.refit_mode));
  j["lattice"] = b.lattice;
  ordered_json crit = ordered_json::array();
  for (const auto& [level, value] : b.critical_values) {
    crit.push_back({{"level", level}, {"ks", value}});
  }
  j["critical_values"] = std::move(crit);
  return j;
}

ordered_json reference_json(const std::string& series) {
  // Fixed comparison values for a national-scale registry; never computed
  // from the input.
  static const std::map<std::string, ordered_json> refs = {
      {"bidders", {{"exponential_beta", 0.27}, {"share_at_most_10_bidders", 0.95}}},
      {"revenues",
       {{"alpha", 1.236}, {"gamma", 0.789}, {"ks", 0.0014}, {"p_value", 0.3820},
        {"top_10_percent_share", 0.80}, {"top_1_percent_share", 0.45}}},
      {"spendings",
       {{"alpha", 0.993}, {"gamma", 0.977}, {"ks", 0.0007}, {"p_value", 0.7541},
        {"top_10_percent_share", 0.87}, {"top_1_percent_share", 0.60}}},
  };
  return refs.at(series);
}

ordered_json series_json(const SeriesReport& r) {
  ordered_json j;
  j["n"] = r.n;
  j["scale"] = r.scale;
  j["cutoff"] = r.cutoff;
  j["n_tail"] = r.n_tail;
  j["tested_fit"] = fit_json(r.tested_fit);
  ordered_json fits = ordered_json::array();
  for (const auto& f : r.fits) fits.push_back(fit_json(f));
  j["fits"] = std::move(fits);
  if (r.zipf) {
    j["zipf"] = {{"gamma", r.zipf->gamma},
                 {"intercept", r.zipf->intercept},
                 {"r_squared", r.zipf->r_squared},
                 {"top_k", r.zipf->top_k},
                 {"top_k_requested", r.zipf_top_k_requested}};
  } else {
    j["zipf"] = nullptr;
  }
  j["bootstrap"] = bootstrap_json(r.bootstrap);
  ordered_json shares = ordered_json::array();
  for (const auto& s : r.top_shares) {
    shares.push_back({{"fraction", s.fraction}, {"share", s.share}});
  }
  j["concentration"] = {{"gini", r.gini},
                        {"top_shares", std::move(shares)},
                        {"pareto_rule_fraction", r.pareto_rule_fraction}};
  if (r.share_at_most_10) j["share_at_most_10"] = *r.share_at_most_10;
  j["reference_values"] = reference_json(r.name);
  return j;
}

}  // namespace

std::string_view tool_version() noexcept { return HEAVYTAIL_VERSION; }

AnalysisResult analyze(const ingest::ParseResult& parsed, const AnalysisConfig& config) {
  if (parsed.records.empty()) {
    fail(ErrorCode::empty_input, "no valid records in the input");
  }
  if (!(config.cutoff >= 0.0) || !std::isfinite(config.cutoff)) {
    fail(ErrorCode::config, "cutoff must be a non-negative number of standard deviations");
  }
  if (!(config.floor >= 0.0) || !std::isfinite(config.floor)) {
    fail(ErrorCode::config, "floor must be non-negative");
  }
  if (config.top_k < 3) fail(ErrorCode::config, "top_k must be at least 3");

  const ingest::Aggregation agg = ingest::aggregate(parsed.records, config.floor);

  AnalysisResult result;
  AnalysisReport& rep = result.report;
  rep.config = config;
  rep.summary = agg.summary;
  rep.skipped = parsed.skipped;
  rep.n_records = parsed.records.size();
  rep.kernel_backend = std::string(simd::to_string(simd::active()));

  rep.bidders = for_series("bidders", [&] {
    return analyze_bidders(agg.bidders, config, result.plots);
  });
  rep.revenues = for_series("revenues", [&] {
    return analyze_money("revenues", agg.revenues, config, kRevenueStream, "fig2",
                         result.plots);
  });
  rep.spendings = for_series("spendings", [&] {
    return analyze_money("spendings", agg.spendings, config, kSpendingStream, "fig3",
                         result.plots);
  });
  return result;
}

nlohmann::ordered_json to_json(const AnalysisReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = std::string(tool_version());
  j["seed"] = r.config.seed;
  j["config"] = {{"input", r.config.input_label},
                 {"delimiter", std::string(1, r.config.delimiter)},
                 {"floor", r.config.floor},
                 {"cutoff", r.config.cutoff},
                 {"replicates", r.config.replicates},
                 {"top_k", r.config.top_k},
                 {"refit", std::string(gof::to_string(r.config.refit))},
                 {"bidder_anchor", r.config.bidder_anchor},
                 {"kernel_backend", r.kernel_backend}};
  j["summary"] = {{"n_records", r.n_records},
                  {"total_money", r.summary.total_money},
                  {"n_suppliers", r.summary.n_suppliers},
                  {"n_authorities", r.summary.n_authorities},
                  {"n_tenders", r.summary.n_tenders},
                  {"n_bids_total", r.summary.n_bids_total}};
  ordered_json skipped = ordered_json::array();
  for (const auto& s : r.skipped) {
    skipped.push_back({{"line", s.line}, {"reason", s.reason}});
  }
  j["skipped_rows"] = std::move(skipped);
  j["series"] = {{"bidders", series_json(r.bidders)},
                 {"revenues", series_json(r.revenues)},
                 {"spendings", series_json(r.spendings)}};
  return j;
}

std::string report_text(const AnalysisReport& report) {
  return to_json(report).dump(2) + "\n";
}

}  // namespace heavytail::analysis

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <string>
#include <vector>

#include "heavytail/analysis.hpp"
#include "heavytail/error.hpp"
#include "heavytail/synthetic.hpp"

using namespace heavytail;
using analysis::AnalysisConfig;

namespace {

const ingest::ParseResult& small_dataset() {
  static const ingest::ParseResult parsed = [] {
    synthetic::DatasetConfig c;
    c.n_suppliers = 4000;
    c.n_authorities = 2000;
    c.seed = 11;
    ingest::ParseResult p;
    p.records = synthetic::generate_dataset(c).records;
    return p;
  }();
  return parsed;
}

AnalysisConfig small_config() {
  AnalysisConfig c;
  c.input_label = "synthetic";
  c.replicates = 200;
  c.seed = 42;
  c.workers = 1;
  return c;
}

ErrorCode code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("report is byte-identical across reruns and worker counts") {
  const auto a = analysis::analyze(small_dataset(), small_config());
  auto c = small_config();
  const auto b = analysis::analyze(small_dataset(), c);
  c.workers = 4;
  const auto d = analysis::analyze(small_dataset(), c);
  const auto text = analysis::report_text(a.report);
  CHECK(text == analysis::report_text(b.report));
  CHECK(text == analysis::report_text(d.report));
  REQUIRE(a.plots.size() == d.plots.size());
  for (std::size_t i = 0; i < a.plots.size(); ++i) {
    CHECK(a.plots[i].x == d.plots[i].x);
    CHECK(a.plots[i].y == d.plots[i].y);
  }
  CHECK(text.back() == '\n');
}

TEST_CASE("report contents") {
  const auto r = analysis::analyze(small_dataset(), small_config());
  const auto j = analysis::to_json(r.report);
  for (const char* key : {"schema_version", "tool_version", "seed", "config", "summary",
                          "skipped_rows", "series"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["schema_version"] == analysis::kSchemaVersion);
  CHECK(j["seed"] == 42);
  CHECK_FALSE(j["config"].contains("workers"));
  for (const char* name : {"bidders", "revenues", "spendings"}) {
    CAPTURE(name);
    const auto& s = j["series"][name];
    for (const char* key : {"n", "scale", "cutoff", "n_tail", "tested_fit", "fits", "zipf",
                            "bootstrap", "concentration", "reference_values"}) {
      CHECK(s.contains(key));
    }
    CHECK(s["bootstrap"]["n_replicates"] == 200);
    const double p = s["bootstrap"]["p_value"];
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(s["concentration"]["top_shares"].size() == 4);
  }
  CHECK(j["series"]["bidders"]["bootstrap"]["lattice"] == true);
  CHECK(j["series"]["bidders"]["zipf"].is_null());
  CHECK(j["series"]["bidders"].contains("share_at_most_10"));
  CHECK(j["series"]["revenues"]["tested_fit"]["method"] == "mle");

  // Summary consistency with the records.
  const auto& rep = r.report;
  CHECK(rep.n_records == small_dataset().records.size());
  CHECK(rep.summary.n_tenders == rep.bidders.n);
  CHECK(rep.summary.n_suppliers == rep.revenues.n);
  CHECK(rep.summary.n_authorities == rep.spendings.n);
  CHECK(rep.revenues.n_tail >= tailfit::kMinTail);
  CHECK(rep.bidders.tested_fit.exponent == Catch::Approx(0.27).margin(0.03));
}

TEST_CASE("plot series are ordered and non-empty") {
  const auto r = analysis::analyze(small_dataset(), small_config());
  REQUIRE(r.plots.size() == 6);
  const std::vector<std::string> names{"fig1_cdf", "fig1_pdf", "fig2_cdf",
                                       "fig2_zipf", "fig3_cdf", "fig3_zipf"};
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& p = r.plots[i];
    CAPTURE(p.file_name);
    CHECK(p.file_name.rfind(names[i], 0) == 0);
    REQUIRE(!p.x.empty());
    REQUIRE(p.x.size() == p.y.size());
    CHECK(std::is_sorted(p.x.begin(), p.x.end()));
    if (p.file_name.find("pdf") != std::string::npos) {
      CHECK(std::all_of(p.y.begin(), p.y.end(), [](double v) { return v >= 0.0; }));
    } else {
      CHECK(std::is_sorted(p.y.rbegin(), p.y.rend()));
    }
  }
}

TEST_CASE("series errors carry the series name") {
  ingest::ParseResult p;
  for (int i = 0; i < 50; ++i) {
    ingest::ProcurementRecord r;
    r.tender_id = "T" + std::to_string(i);
    r.authority_id = "A" + std::to_string(i);
    r.winner_id = "S" + std::to_string(i);
    r.price = 3e6;
    r.n_bidders = 1 + i % 7;
    p.records.push_back(r);
  }
  std::string message;
  const auto code = code_of([&] { analysis::analyze(p, small_config()); }, &message);
  CHECK(code == ErrorCode::zero_variance);
  CHECK(message.find("series revenues") != std::string::npos);

  CHECK(code_of([] { analysis::analyze(ingest::ParseResult{}, small_config()); }) ==
        ErrorCode::empty_input);
}

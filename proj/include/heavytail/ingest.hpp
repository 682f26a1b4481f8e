#pragma once

// Transaction-level procurement records and their aggregation into the three
// analysis series: per-supplier revenues, per-authority spendings and
// per-tender bidder counts.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heavytail/sample.hpp"

namespace heavytail::ingest {

/// Registration floor for aggregated totals (currency units).
inline constexpr double kDefaultFloor = 2e6;

struct ProcurementRecord {
  std::string tender_id;
  std::string authority_id;
  std::string winner_id;
  double price = 0.0;
  std::int64_t n_bidders = 1;
  std::optional<std::chrono::year_month_day> date;
};

/// Column names looked up in the header row, plus the field delimiter.
struct Schema {
  char delimiter = ',';
  std::string tender_id = "tender_id";
  std::string authority_id = "authority_id";
  std::string winner_id = "winner_id";
  std::string price = "price";
  std::string n_bidders = "n_bidders";
  std::string date = "date";  // optional column
};

struct SkippedRow {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
};

struct ParseResult {
  std::vector<ProcurementRecord> records;
  std::vector<SkippedRow> skipped;
};

/// Parses delimiter-separated text with a header row. Fields may be quoted
/// with '"' ("" escapes a quote). Invalid rows are skipped with a reason;
/// a missing header or missing required column throws Error(schema).
ParseResult parse_records(std::istream& in, const Schema& schema = {});

struct AggregationSummary {
  double total_money = 0.0;       // M, all record prices
  std::size_t n_suppliers = 0;    // C, suppliers at or above the floor
  std::size_t n_authorities = 0;  // Z, authorities at or above the floor
  std::size_t n_tenders = 0;      // W
  std::size_t n_bids_total = 0;   // F, sum of bidder counts
};

struct Aggregation {
  Sample revenues;
  Sample spendings;
  Sample bidders;
  AggregationSummary summary;
  std::vector<std::string> supplier_ids;   // parallel to revenues
  std::vector<std::string> authority_ids;  // parallel to spendings
};

/// Per-entity totals are ordered by entity id and each total is summed over
/// its prices in ascending order, so the result does not depend on record
/// order. Totals below `floor` are dropped; bidder counts are not filtered.
Aggregation aggregate(std::span<const ProcurementRecord> records,
                      double floor = kDefaultFloor);

struct Standardized {
  Sample values;
  double scale = 1.0;  // sample standard deviation, n - 1 denominator
};

/// Divides every value by the sample standard deviation. There is no mean
/// subtraction: the result stays positive and is read as "number of standard
/// deviations".
Standardized standardize(const Sample& sample);

}  // namespace heavytail::ingest

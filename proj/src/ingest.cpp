#include "heavytail/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <unordered_set>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"

namespace heavytail::ingest {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits one line; returns false on an unterminated quote.
bool split_fields(std::string_view line, char delim,
                  std::vector<std::string>& fields) {
  fields.clear();
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (quoted) return false;
  fields.emplace_back(trim(current));
  return true;
}

std::optional<std::chrono::year_month_day> parse_date(std::string_view s) {
  // YYYY-MM-DD
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto ok = [](std::from_chars_result r, const char* end) {
    return r.ec == std::errc{} && r.ptr == end;
  };
  const char* p = s.data();
  if (!ok(std::from_chars(p, p + 4, y), p + 4) ||
      !ok(std::from_chars(p + 5, p + 7, m), p + 7) ||
      !ok(std::from_chars(p + 8, p + 10, d), p + 10)) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

struct ColumnIndex {
  std::size_t tender = 0, authority = 0, winner = 0, price = 0, bidders = 0;
  std::optional<std::size_t> date;
  std::size_t width = 0;
};

ColumnIndex resolve_header(const std::vector<std::string>& header,
                           const Schema& schema) {
  std::map<std::string, std::size_t, std::less<>> position;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!position.emplace(header[i], i).second) {
      fail(ErrorCode::schema, "duplicate column '" + header[i] + "' in header");
    }
  }
  auto require = [&](const std::string& name) {
    const auto it = position.find(name);
    if (it == position.end()) {
      fail(ErrorCode::schema, "required column '" + name + "' missing from header");
    }
    return it->second;
  };
  ColumnIndex idx;
  idx.tender = require(schema.tender_id);
  idx.authority = require(schema.authority_id);
  idx.winner = require(schema.winner_id);
  idx.price = require(schema.price);
  idx.bidders = require(schema.n_bidders);
  if (const auto it = position.find(schema.date); it != position.end()) {
    idx.date = it->second;
  }
  idx.width = header.size();
  return idx;
}

// Returns an empty string on success, otherwise the rejection reason.
std::string parse_row(const std::vector<std::string>& f, const ColumnIndex& idx,
                      ProcurementRecord& rec) {
  if (f.size() != idx.width) {
    return "expected " + std::to_string(idx.width) + " fields, found " +
           std::to_string(f.size());
  }
  rec.tender_id = f[idx.tender];
  rec.authority_id = f[idx.authority];
  rec.winner_id = f[idx.winner];
  if (rec.tender_id.empty()) return "empty tender_id";
  if (rec.authority_id.empty()) return "empty authority_id";
  if (rec.winner_id.empty()) return "empty winner_id";

  const std::string& price = f[idx.price];
  const char* pb = price.data();
  const char* pe = pb + price.size();
  if (pb != pe && *pb == '+') ++pb;
  const auto pr = std::from_chars(pb, pe, rec.price);
  if (price.empty() || pr.ec != std::errc{} || pr.ptr != pe ||
      !std::isfinite(rec.price)) {
    return "non-numeric price";
  }
  if (!(rec.price > 0.0)) return "non-positive price";

  const std::string& bidders = f[idx.bidders];
  const auto br = std::from_chars(bidders.data(), bidders.data() + bidders.size(),
                                  rec.n_bidders);
  if (bidders.empty() || br.ec != std::errc{} ||
      br.ptr != bidders.data() + bidders.size()) {
    return "non-integer n_bidders";
  }
  if (rec.n_bidders < 1) return "n_bidders below 1";

  rec.date.reset();
  if (idx.date && !f[*idx.date].empty()) {
    rec.date = parse_date(f[*idx.date]);
    if (!rec.date) return "invalid date (expected YYYY-MM-DD)";
  }
  return {};
}

double ordered_sum(std::vector<double>& prices) {
  std::sort(prices.begin(), prices.end());
  return std::accumulate(prices.begin(), prices.end(), 0.0);
}

}  // namespace

ParseResult parse_records(std::istream& in, const Schema& schema) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;

  // Header: first non-blank line.
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!trim(line).empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) fail(ErrorCode::schema, "input has no header row");
  if (!split_fields(line, schema.delimiter, fields)) {
    fail(ErrorCode::schema, "unterminated quote in header");
  }
  const ColumnIndex idx = resolve_header(fields, schema);

  ParseResult result;
  std::unordered_set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!split_fields(line, schema.delimiter, fields)) {
      result.skipped.push_back({line_no, "unterminated quote"});
      continue;
    }
    ProcurementRecord rec;
    if (std::string reason = parse_row(fields, idx, rec); !reason.empty()) {
      result.skipped.push_back({line_no, std::move(reason)});
      continue;
    }
    if (!seen.insert(rec.tender_id).second) {
      result.skipped.push_back({line_no, "duplicate tender_id"});
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

Aggregation aggregate(std::span<const ProcurementRecord> records, double floor) {
  if (records.empty()) fail(ErrorCode::empty_input, "no records to aggregate");
  if (!(floor >= 0.0)) fail(ErrorCode::domain, "floor must be non-negative");

  std::map<std::string, std::vector<double>> by_winner;
  std::map<std::string, std::vector<double>> by_authority;
  std::vector<double> all_prices;
  std::vector<double> bidders;
  all_prices.reserve(records.size());
  bidders.reserve(records.size());
  std::size_t bids_total = 0;
  for (const auto& r : records) {
    by_winner[r.winner_id].push_back(r.price);
    by_authority[r.authority_id].push_back(r.price);
    all_prices.push_back(r.price);
    bidders.push_back(static_cast<double>(r.n_bidders));
    bids_total += static_cast<std::size_t>(r.n_bidders);
  }
  // Bidder counts are emitted in ascending order so the series itself is
  // independent of record order.
  std::sort(bidders.begin(), bidders.end());

  auto totals = [floor](std::map<std::string, std::vector<double>>& groups,
                        std::vector<std::string>& ids) {
    std::vector<double> out;
    for (auto& [id, prices] : groups) {
      const double total = ordered_sum(prices);
      if (total >= floor) {
        out.push_back(total);
        ids.push_back(id);
      }
    }
    return out;
  };

  std::vector<std::string> supplier_ids, authority_ids;
  std::vector<double> revenues = totals(by_winner, supplier_ids);
  std::vector<double> spendings = totals(by_authority, authority_ids);
  if (revenues.empty()) {
    fail(ErrorCode::empty_input, "no supplier total reaches the floor " +
                                     format_double(floor));
  }
  if (spendings.empty()) {
    fail(ErrorCode::empty_input, "no authority total reaches the floor " +
                                     format_double(floor));
  }

  AggregationSummary summary;
  summary.total_money = ordered_sum(all_prices);
  summary.n_suppliers = revenues.size();
  summary.n_authorities = spendings.size();
  summary.n_tenders = records.size();
  summary.n_bids_total = bids_total;

  return Aggregation{
      Sample(std::move(revenues), SampleKind::revenues, "currency"),
      Sample(std::move(spendings), SampleKind::spendings, "currency"),
      Sample(std::move(bidders), SampleKind::bidder_counts, "bidders"),
      summary,
      std::move(supplier_ids),
      std::move(authority_ids),
  };
}

Standardized standardize(const Sample& sample) {
  const auto v = sample.values();
  if (v.size() < 2) {
    fail(ErrorCode::zero_variance, "standardization needs at least two values");
  }
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) {
    fail(ErrorCode::zero_variance,
         "sample '" + std::string(to_string(sample.kind())) + "' is constant");
  }
  const double n = static_cast<double>(v.size());
  const double mean = simd::sum(v) / n;
  const double sd = std::sqrt(simd::sum_sq_dev(v, mean) / (n - 1.0));
  if (!(sd > 0.0)) {
    fail(ErrorCode::zero_variance,
         "sample '" + std::string(to_string(sample.kind())) + "' is constant");
  }
  std::vector<double> out(v.size());
  simd::scale(v, 1.0 / sd, out);
  return {Sample(std::move(out), sample.kind(), "sd"), sd};
}

}  // namespace heavytail::ingest

#pragma once

// Synthetic procurement registries with known generating laws: supplier
// revenues and authority spendings drawn from power-law (q < 1 Tsallis)
// maximum-entropy solutions, bidder counts from a Boltzmann solution.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "heavytail/ingest.hpp"
#include "heavytail/maxent.hpp"

namespace heavytail::synthetic {

struct DatasetConfig {
  std::size_t n_suppliers = 20000;
  std::size_t n_authorities = 10000;
  double revenue_tail_exponent = 1.24;
  double spending_tail_exponent = 1.0;
  /// Money levels are unit, 2 unit, ..., level_count unit.
  std::size_t level_count = 100000;
  double level_unit = ingest::kDefaultFloor;
  /// Target means of the two solutions, in multiples of level_unit.
  double revenue_mean_levels = 18.0;
  double spending_mean_levels = 50.0;
  double bidder_kappa = 0.27;
  std::size_t max_bidders = 60;
  std::uint64_t seed = 1;
};

struct Dataset {
  std::vector<ingest::ProcurementRecord> records;
  maxent::MaxEntSolution revenue_law;
  maxent::MaxEntSolution spending_law;
  maxent::MaxEntSolution bidder_law;
};

/// Draws per-entity totals, rescales the smaller money series so both sum to
/// the same total, then splits the totals into tenders with the
/// north-west-corner rule over shuffled supplier and authority orders. Each
/// tender gets an independent Boltzmann bidder count.
Dataset generate_dataset(const DatasetConfig& config);

/// CSV with the default ingest header (tender_id, authority_id, winner_id,
/// price, n_bidders, date).
void write_records(std::ostream& out,
                   const std::vector<ingest::ProcurementRecord>& records);

}  // namespace heavytail::synthetic

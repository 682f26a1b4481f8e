#include "heavytail/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "heavytail/error.hpp"
#include "heavytail/rng.hpp"

namespace heavytail::synthetic {
namespace {

std::string make_id(char prefix, std::size_t index, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, index + 1);
  return buf;
}

std::vector<double> draw_totals(const maxent::MaxEntSolution& law, std::size_t n,
                                std::uint64_t seed) {
  const Sample s = maxent::generate_synthetic(law, n, seed);
  return {s.values().begin(), s.values().end()};
}

maxent::MaxEntSolution power_law(const std::vector<double>& levels, double exponent,
                                 double mean_levels) {
  maxent::MaxEntProblem problem;
  problem.levels = levels;
  problem.target_mean = mean_levels;
  problem.entropy = maxent::Entropy::tsallis;
  problem.q = maxent::tsallis_q_for_tail_exponent(exponent);
  return maxent::solve_tsallis(problem);
}

// Fisher-Yates with a seeded stream; std::shuffle is implementation-defined.
template <typename T>
void shuffle(std::vector<T>& v, std::uint64_t seed) {
  UniformStream u(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(u.next() * static_cast<double>(i));
    std::swap(v[i - 1], v[std::min(j, i - 1)]);
  }
}

}  // namespace

Dataset generate_dataset(const DatasetConfig& config) {
  if (config.n_suppliers == 0 || config.n_authorities == 0) {
    fail(ErrorCode::config, "dataset needs at least one supplier and one authority");
  }
  if (config.max_bidders < 2) fail(ErrorCode::config, "max_bidders must be at least 2");

  Dataset data;
  const std::vector<double> levels = maxent::linear_levels(1.0, 1.0, config.level_count);
  data.revenue_law =
      power_law(levels, config.revenue_tail_exponent, config.revenue_mean_levels);
  data.spending_law =
      power_law(levels, config.spending_tail_exponent, config.spending_mean_levels);
  data.bidder_law = maxent::boltzmann(
      maxent::linear_levels(1.0, 1.0, config.max_bidders), config.bidder_kappa);

  std::vector<double> revenues =
      draw_totals(data.revenue_law, config.n_suppliers, derive_seed(config.seed, 1));
  std::vector<double> spendings =
      draw_totals(data.spending_law, config.n_authorities, derive_seed(config.seed, 2));

  // Scale the smaller series up so both carry the same money; every total
  // stays at or above one level unit, hence at or above the floor. Whole
  // currency units keep every split exact.
  const double rev_total = std::accumulate(revenues.begin(), revenues.end(), 0.0);
  const double spend_total = std::accumulate(spendings.begin(), spendings.end(), 0.0);
  const double rev_factor =
      config.level_unit * std::max(1.0, spend_total / rev_total);
  const double spend_factor =
      config.level_unit * std::max(1.0, rev_total / spend_total);
  for (double& v : revenues) v = std::round(v * rev_factor);
  for (double& v : spendings) v = std::round(v * spend_factor);
  // Rounding can leave the two totals a few units apart; the larger series
  // absorbs the difference in its largest entity.
  const double diff = std::accumulate(revenues.begin(), revenues.end(), 0.0) -
                      std::accumulate(spendings.begin(), spendings.end(), 0.0);
  if (diff > 0.0) {
    *std::max_element(revenues.begin(), revenues.end()) -= diff;
  } else {
    *std::max_element(spendings.begin(), spendings.end()) += diff;
  }

  std::vector<std::size_t> sup_order(revenues.size()), auth_order(spendings.size());
  std::iota(sup_order.begin(), sup_order.end(), 0);
  std::iota(auth_order.begin(), auth_order.end(), 0);
  shuffle(sup_order, derive_seed(config.seed, 3));
  shuffle(auth_order, derive_seed(config.seed, 4));

  const Sample bidders = maxent::generate_synthetic(
      data.bidder_law, config.n_suppliers + config.n_authorities,
      derive_seed(config.seed, 5));

  const std::chrono::sys_days first_day =
      std::chrono::year{2006} / std::chrono::June / std::chrono::day{1};
  std::size_t si = 0, ai = 0;
  double left_s = revenues[sup_order[0]];
  double left_a = spendings[auth_order[0]];
  while (si < sup_order.size() && ai < auth_order.size()) {
    const double piece = std::min(left_s, left_a);
    const std::size_t t = data.records.size();
    ingest::ProcurementRecord rec;
    rec.tender_id = make_id('T', t, 7);
    rec.authority_id = make_id('A', auth_order[ai], 6);
    rec.winner_id = make_id('S', sup_order[si], 6);
    rec.price = piece;
    rec.n_bidders = static_cast<std::int64_t>(bidders.values()[t % bidders.size()]);
    rec.date = std::chrono::year_month_day{first_day + std::chrono::days{t % 1900}};
    data.records.push_back(std::move(rec));

    left_s -= piece;
    left_a -= piece;
    if (left_s == 0.0 && ++si < sup_order.size()) left_s = revenues[sup_order[si]];
    if (left_a == 0.0 && ++ai < auth_order.size()) left_a = spendings[auth_order[ai]];
  }
  return data;
}

void write_records(std::ostream& out,
                   const std::vector<ingest::ProcurementRecord>& records) {
  out << "tender_id,authority_id,winner_id,price,n_bidders,date\n";
  char date[16];
  for (const auto& r : records) {
    out << r.tender_id << ',' << r.authority_id << ',' << r.winner_id << ','
        << format_double(r.price) << ',' << r.n_bidders << ',';
    if (r.date) {
      std::snprintf(date, sizeof date, "%04d-%02u-%02u", static_cast<int>(r.date->year()),
                    static_cast<unsigned>(r.date->month()),
                    static_cast<unsigned>(r.date->day()));
      out << date;
    }
    out << '\n';
  }
}

}  // namespace heavytail::synthetic

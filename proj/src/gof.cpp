#include "heavytail/gof.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"
#include "heavytail/rng.hpp"

namespace heavytail::gof {
namespace {

bool same_bound(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

double ks_sorted(std::span<const double> sorted, const dist::DistributionSpec& spec,
                 std::span<double> scratch) {
  dist::tail_function(spec, sorted, scratch);
  return simd::ks_sup(scratch);
}

// Lattice points run cutoff + k for k = 0 .. max index + 1.
double ks_lattice_sorted(std::span<const double> sorted, double cutoff,
                         const dist::DistributionSpec& spec) {
  const auto n = sorted.size();
  const auto top = static_cast<std::size_t>(std::llround(sorted.back() - cutoff));
  double d = 0.0;
  std::size_t below = 0;  // observations strictly below the current point
  for (std::size_t k = 0; k <= top + 1; ++k) {
    const double b = cutoff + static_cast<double>(k);
    while (below < n && sorted[below] < b - 0.5) ++below;
    const double emp = static_cast<double>(n - below) / static_cast<double>(n);
    d = std::max(d, std::abs(emp - dist::tail_function(spec, b)));
  }
  return d;
}

void check_lattice(std::span<const double> values, double cutoff) {
  for (double v : values) {
    const double k = v - cutoff;
    if (!(k >= 0.0) || std::abs(k - std::round(k)) > 1e-9 || k > 1e7) {
      fail(ErrorCode::domain, "value " + format_double(v) +
                                  " is not on the unit lattice above the cutoff " +
                                  format_double(cutoff));
    }
  }
}

}  // namespace

std::string_view to_string(RefitMode mode) noexcept {
  return mode == RefitMode::fixed ? "fixed" : "refit";
}

double BootstrapReport::critical_value(double level) const {
  for (const auto& [lvl, value] : critical_values) {
    if (lvl == level) return value;
  }
  fail(ErrorCode::range, "no critical value stored for level " + format_double(level));
}

double ks_statistic(const tailfit::TailSelection& tail,
                    const dist::DistributionSpec& spec) {
  if (tail.tail_values.empty()) {
    fail(ErrorCode::insufficient_tail, "KS statistic of an empty tail");
  }
  if (!same_bound(spec.x_min(), tail.cutoff)) {
    fail(ErrorCode::domain, "model x_min " + format_double(spec.x_min()) +
                                " does not match the tail cutoff " +
                                format_double(tail.cutoff));
  }
  std::vector<double> scratch(tail.n_tail());
  return ks_sorted(tail.tail_values, spec, scratch);
}

double ks_statistic_lattice(const tailfit::TailSelection& tail,
                            const dist::DistributionSpec& spec) {
  if (tail.tail_values.empty()) {
    fail(ErrorCode::insufficient_tail, "KS statistic of an empty tail");
  }
  if (!same_bound(spec.x_min(), tail.cutoff)) {
    fail(ErrorCode::domain, "model x_min " + format_double(spec.x_min()) +
                                " does not match the tail cutoff " +
                                format_double(tail.cutoff));
  }
  check_lattice(tail.tail_values, tail.cutoff);
  return ks_lattice_sorted(tail.tail_values, tail.cutoff, spec);
}

double upper_critical_value(std::span<const double> sorted_ks, double level) {
  if (sorted_ks.empty()) fail(ErrorCode::empty_input, "no replicate statistics");
  const double n = static_cast<double>(sorted_ks.size());
  // The small offset keeps products like 0.95 * 10000 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - level) * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted_ks.size());
  return sorted_ks[rank - 1];
}

BootstrapReport bootstrap_test(const tailfit::TailSelection& tail,
                               const tailfit::TailFit& fit,
                               const BootstrapOptions& options) {
  if (options.n_replicates < kMinReplicates) {
    fail(ErrorCode::config, "at least " + std::to_string(kMinReplicates) +
                                " bootstrap replicates are required, got " +
                                std::to_string(options.n_replicates));
  }
  if (!same_bound(fit.cutoff, tail.cutoff)) {
    fail(ErrorCode::domain, "fit cutoff " + format_double(fit.cutoff) +
                                " does not match the tail cutoff " +
                                format_double(tail.cutoff));
  }
  const dist::DistributionSpec model = tailfit::to_spec(fit);
  const std::size_t n = tail.n_tail();
  if (options.lattice && model.family() != dist::Family::exponential) {
    fail(ErrorCode::config, "the lattice bootstrap needs an exponential model");
  }

  BootstrapReport report;
  report.observed_ks = options.lattice ? ks_statistic_lattice(tail, model)
                                       : ks_statistic(tail, model);
  report.n_replicates = options.n_replicates;
  report.refit_mode = options.mode;
  report.lattice = options.lattice;
  const double cutoff = tail.cutoff;
  auto statistic = [&](std::span<const double> sorted,
                       const dist::DistributionSpec& spec, std::span<double> scratch) {
    return options.lattice ? ks_lattice_sorted(sorted, cutoff, spec)
                           : ks_sorted(sorted, spec, scratch);
  };

  std::vector<double> stats(options.n_replicates);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    std::vector<double> values(n);
    std::vector<double> scratch(n);
    constexpr std::size_t kBatch = 32;
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(kBatch);
        if (begin >= stats.size()) break;
        const std::size_t end = std::min(begin + kBatch, stats.size());
        for (std::size_t r = begin; r < end; ++r) {
          dist::draw(model, derive_seed(options.seed, r), values);
          if (options.lattice) {
            for (double& v : values) v = cutoff + std::floor(v - cutoff);
          }
          std::sort(values.begin(), values.end());
          if (options.mode == RefitMode::fixed) {
            stats[r] = statistic(values, model, scratch);
          } else {
            const tailfit::TailSelection rep = tailfit::make_tail(values, cutoff);
            const dist::DistributionSpec refitted =
                tailfit::to_spec(tailfit::refit(fit, rep));
            stats[r] = statistic(rep.tail_values, refitted, scratch);
          }
        }
      }
    } catch (...) {
      const std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(stats.size());
    }
  };

  unsigned workers = options.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, (stats.size() + 31) / 32));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  report.n_at_least_observed = static_cast<std::size_t>(std::count_if(
      stats.begin(), stats.end(), [&](double d) { return d >= report.observed_ks; }));
  report.p_value = static_cast<double>(report.n_at_least_observed) /
                   static_cast<double>(report.n_replicates);

  std::vector<double> sorted = stats;
  std::sort(sorted.begin(), sorted.end());
  for (double level : kSignificanceLevels) {
    report.critical_values.emplace_back(level, upper_critical_value(sorted, level));
  }
  if (options.keep_replicates) report.replicate_ks = std::move(stats);
  return report;
}

}  // namespace heavytail::gof

#pragma once

// Parametric-bootstrap Kolmogorov-Smirnov goodness of fit.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "heavytail/distributions.hpp"
#include "heavytail/tailfit.hpp"

namespace heavytail::gof {

inline constexpr std::size_t kDefaultReplicates = 10000;
inline constexpr std::size_t kMinReplicates = 100;
inline constexpr std::array<double, 3> kSignificanceLevels{0.10, 0.05, 0.01};

enum class RefitMode {
  fixed,  // compare every replicate with the originally fitted model
  refit,  // re-estimate the exponent on each replicate first
};

std::string_view to_string(RefitMode mode) noexcept;

struct BootstrapReport {
  double observed_ks = 0.0;
  std::size_t n_replicates = 0;
  std::size_t n_at_least_observed = 0;
  double p_value = 0.0;
  /// (significance level, critical KS value), levels as in kSignificanceLevels.
  std::vector<std::pair<double, double>> critical_values;
  RefitMode refit_mode = RefitMode::fixed;
  bool lattice = false;
  /// Replicate statistics in replicate order; filled when requested.
  std::vector<double> replicate_ks;

  double critical_value(double level) const;
  bool operator==(const BootstrapReport&) const = default;
};

/// Two-sided KS distance between the empirical distribution of the tail and
/// the model's cdf G = 1 - tail_function. The model's x_min must equal the
/// tail cutoff.
double ks_statistic(const tailfit::TailSelection& tail,
                    const dist::DistributionSpec& spec);

/// KS distance for data on the unit lattice cutoff, cutoff + 1, ...: the
/// largest gap between the empirical and model tails over the lattice points
/// from the cutoff to one past the largest observation. Values off the
/// lattice throw Error(domain).
double ks_statistic_lattice(const tailfit::TailSelection& tail,
                            const dist::DistributionSpec& spec);

struct BootstrapOptions {
  std::size_t n_replicates = kDefaultReplicates;
  std::uint64_t seed = 0;
  RefitMode mode = RefitMode::fixed;
  unsigned workers = 0;  // 0: std::thread::hardware_concurrency()
  bool keep_replicates = false;
  /// Counts on a unit lattice: replicates are cutoff + floor(draw - cutoff)
  /// (geometric for an exponential model) and the lattice KS distance is used.
  /// Exponential models only.
  bool lattice = false;
};

/// Replicate r draws n_tail values from the fitted model using the stream
/// derive_seed(seed, r). Statistics are stored by replicate index and reduced
/// afterwards, so the report does not depend on the worker count.
BootstrapReport bootstrap_test(const tailfit::TailSelection& tail,
                               const tailfit::TailFit& fit,
                               const BootstrapOptions& options);

/// Nearest-rank (1 - level) quantile of replicate statistics sorted
/// ascending: the ceil((1 - level) n)-th smallest value.
double upper_critical_value(std::span<const double> sorted_ks, double level);

}  // namespace heavytail::gof

#pragma once

// Tail selection and exponent estimation for the exponential, Pareto and
// Zipf (rank-size) laws.
//
// Empirical tail convention: for a sample sorted ascending, the i-th value
// (1-based) gets F_emp = (n - i + 1) / n. No continuity correction.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "heavytail/distributions.hpp"
#include "heavytail/sample.hpp"

namespace heavytail::tailfit {

inline constexpr double kDefaultCutoff = 1.0;    // in standard deviations
inline constexpr std::size_t kMinTail = 10;      // fits abort below this
inline constexpr std::size_t kDefaultTopK = 100;

struct TailSelection {
  double cutoff = 0.0;
  std::size_t n_total = 0;
  std::vector<double> tail_values;  // ascending, all >= cutoff

  std::size_t n_tail() const noexcept { return tail_values.size(); }
};

/// Keeps the values >= cutoff (cutoff >= 0). Does not enforce the
/// minimum tail size; the fits do.
TailSelection select_tail(const Sample& sample, double cutoff = kDefaultCutoff);

/// Builds a selection from values already known to lie at or above the
/// cutoff (bootstrap replicates, synthetic data). Sorts in place.
TailSelection make_tail(std::vector<double> values, double cutoff);

enum class Method { regression, mle };

struct TailFit {
  dist::Family family = dist::Family::pareto;
  Method method = Method::mle;
  double exponent = 0.0;  // alpha (pareto) or beta (exponential)
  double cutoff = 0.0;    // support lower bound of the fitted model
  std::optional<double> r_squared;  // regression only
  double std_error = 0.0;
  std::size_t n_points = 0;  // observations (mle) or regression points
};

struct ZipfFit {
  double gamma = 0.0;
  std::size_t top_k = 0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_std_error = 0.0;
};

/// Ordinary least squares y = a + b x. Needs two distinct x values.
LineFit ols(std::span<const double> x, std::span<const double> y);
/// Least squares through the origin y = b x; r_squared is the uncentered
/// 1 - SSR / sum(y^2).
LineFit ols_through_origin(std::span<const double> x, std::span<const double> y);

/// Continuous-Pareto maximum likelihood (Hill) exponent n / sum ln(x_i / cutoff).
/// Throws Error(divergent_estimate) when every value equals the cutoff.
double hill_estimate(std::span<const double> values, double cutoff);

TailFit fit_power_mle(const TailSelection& tail, std::size_t min_tail = kMinTail);

/// Log-log regression of the empirical tail on the values; exponent = -slope.
TailFit fit_power_regression(const TailSelection& tail,
                             std::size_t min_tail = kMinTail);

/// With an anchor b0: least squares of ln F_emp(b) on (b - b0) through the
/// origin over the distinct values b >= b0, with F_emp(b) = #{x >= b} / n and n
/// the count of values >= b0 (so F_emp(b0) = 1). Without an anchor: shifted
/// exponential MLE 1 / (mean - min).
TailFit fit_exponential(const Sample& sample,
                        std::optional<double> fixed_intercept_at = std::nullopt);
TailFit fit_exponential(std::span<const double> values,
                        std::optional<double> fixed_intercept_at = std::nullopt);

/// Rank-size regression of ln(value) on ln(rank) over the top_k largest
/// values; gamma = -slope. Ties keep their order of appearance.
ZipfFit fit_zipf(const Sample& sample, std::size_t top_k = kDefaultTopK);

/// Re-estimates with the same family and method as `like`, on new tail data
/// with the same cutoff. Used by the refitting bootstrap.
TailFit refit(const TailFit& like, const TailSelection& tail);

/// Model implied by a fit: pareto(alpha, cutoff) or exponential(beta, cutoff).
dist::DistributionSpec to_spec(const TailFit& fit);

/// Empirical tail points (x, F_emp) in ascending x for plotting.
struct TailCurve {
  std::vector<double> x;
  std::vector<double> tail;
};
TailCurve empirical_tail(std::span<const double> sorted_values);
/// Same at distinct values only: F_emp(b) = #{x >= b} / n.
TailCurve empirical_tail_distinct(std::span<const double> sorted_values);

}  // namespace heavytail::tailfit

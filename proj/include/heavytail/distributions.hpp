#pragma once

// Reference distributions on [x_min, inf) with the tail convention
// F(x) = P(X >= x):
//
//   exponential    F(x) = exp(-beta (x - x_min))
//   pareto         F(x) = (x / x_min)^(-alpha)
//   q_exponential  f(x) ∝ (1 + (q - 1)(x - x_min) / scale)^(-1/(q - 1)),
//                  1 < q < 2, so F(x) = (1 + (q-1)(x-x_min)/scale)^(-(2-q)/(q-1))
//
// The q-exponential density has the power-law-type shape (A + k m)^(-1/(q-1))
// of the Tsallis maximum-entropy solution; its tail exponent is
// (2 - q)/(q - 1) and it tends to exponential(1/scale) as q -> 1+.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "heavytail/sample.hpp"

namespace heavytail::dist {

enum class Family { exponential, pareto, q_exponential };

std::string_view to_string(Family family) noexcept;

class DistributionSpec {
 public:
  /// beta > 0, x_min >= 0.
  static DistributionSpec exponential(double beta, double x_min = 0.0);
  /// alpha > 0, x_min > 0.
  static DistributionSpec pareto(double alpha, double x_min = 1.0);
  /// 1 < q < 2, scale > 0, x_min >= 0.
  static DistributionSpec q_exponential(double q, double scale,
                                        double x_min = 0.0);

  Family family() const noexcept { return family_; }
  double x_min() const noexcept { return x_min_; }
  std::optional<double> rate_beta() const noexcept { return beta_; }
  std::optional<double> exponent_alpha() const noexcept { return alpha_; }
  std::optional<double> entropic_q() const noexcept { return q_; }
  std::optional<double> scale() const noexcept { return scale_; }

  /// Returns a copy with a different support bound (same family/parameters).
  DistributionSpec with_x_min(double x_min) const;

 private:
  DistributionSpec(Family family, double x_min) : family_(family), x_min_(x_min) {}

  Family family_;
  double x_min_;
  std::optional<double> beta_;
  std::optional<double> alpha_;
  std::optional<double> q_;
  std::optional<double> scale_;
};

/// P(X >= x). Throws Error(domain) for x < x_min.
double tail_function(const DistributionSpec& spec, double x);
/// Batch form; uses the SIMD kernels for exponential and pareto.
void tail_function(const DistributionSpec& spec, std::span<const double> x,
                   std::span<double> out);

/// |dF/dx|. Throws Error(domain) for x < x_min.
double density(const DistributionSpec& spec, double x);

/// Inverse of the tail function: tail_function(spec, quantile(spec, u)) == u
/// for u in (0, 1].
double quantile(const DistributionSpec& spec, double u);

/// Tail exponent of the power-law families (alpha, or (2-q)/(q-1)).
/// Throws Error(domain) for the exponential family.
double tail_exponent(const DistributionSpec& spec);

double mean(const DistributionSpec& spec);

/// Fills `out` by inverse transform of the UniformStream seeded with `seed`.
void draw(const DistributionSpec& spec, std::uint64_t seed, std::span<double> out);

/// n inverse-transform draws; identical (spec, n, seed) give identical values
/// on a given SIMD backend.
Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace heavytail::dist

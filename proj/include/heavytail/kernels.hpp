#pragma once

// Data-parallel inner loops shared by every module.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The variant is chosen once at first use from the CPU features and
// the HEAVYTAIL_SIMD environment variable (scalar | avx2 | auto). Results of
// the two backends agree to a few ulp but are not bit-identical, so anything
// that must be byte-reproducible has to run on a single backend.

#include <cstddef>
#include <span>
#include <string_view>

namespace heavytail::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend backend) noexcept;

bool available(Backend backend) noexcept;
Backend active() noexcept;

/// Throws Error(config) when the backend is not usable on this machine.
void select(Backend backend);

/// Restores the previous backend on scope exit. Not thread-safe; meant for
/// tests and benchmarks that compare backends.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend backend);
  ~ScopedBackend();
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

// Reductions.
double sum(std::span<const double> x);
/// Sum of (x_i - center)^2.
double sum_sq_dev(std::span<const double> x, double center);
double dot(std::span<const double> a, std::span<const double> b);
/// Sum of (i + 1) * x_i, the weighted sum behind the sorted-array Gini formula.
double rank_weighted_sum(std::span<const double> x);
/// Sum of ln(x_i / ref). All x_i must be positive.
double sum_log_ratio(std::span<const double> x, double ref);

// Element-wise maps. `out` must have the same length as the input.
void scale(std::span<const double> x, double factor, std::span<double> out);
void log(std::span<const double> x, std::span<double> out);
void exp(std::span<const double> x, std::span<double> out);

/// (x / x_min)^(-alpha)
void pareto_tail(std::span<const double> x, double alpha, double x_min,
                 std::span<double> out);
/// exp(-beta (x - x_min))
void exponential_tail(std::span<const double> x, double beta, double x_min,
                      std::span<double> out);
/// x_min * u^(-1/alpha)
void pareto_quantile(std::span<const double> u, double alpha, double x_min,
                     std::span<double> out);
/// x_min - ln(u) / beta
void exponential_quantile(std::span<const double> u, double beta, double x_min,
                          std::span<double> out);

/// exp(-beta * y)
void boltzmann_weights(std::span<const double> y, double beta,
                       std::span<double> out);
/// [1 + slope * y]^power where the bracket is positive, 0 elsewhere.
/// log1p-accurate so the power can be as large as 1e6 without losing the
/// exponential limit.
void q_weights(std::span<const double> y, double slope, double power,
               std::span<double> out);

/// Two-sided Kolmogorov-Smirnov distance for a sample sorted ascending,
/// given the model tail probabilities P(X >= x_(i)) at each order statistic:
/// max_i max(|i/n - G_i|, |(i-1)/n - G_i|) with G_i = 1 - tail_i.
double ks_sup(std::span<const double> tail_at_sorted);

}  // namespace heavytail::simd

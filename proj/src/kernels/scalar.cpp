#include <algorithm>
#include <cmath>

#include "kernel_table.hpp"

namespace heavytail::simd::detail {
namespace {

double sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - center;
    s += d * d;
  }
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double rank_weighted_sum(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += static_cast<double>(i + 1) * x[i];
  return s;
}

double sum_log_ratio(const double* x, std::size_t n, double ref) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::log(x[i] / ref);
  return s;
}

void scale(const double* x, std::size_t n, double factor, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * factor;
}

void log_map(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void exp_map(const double* x, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void pareto_tail(const double* x, std::size_t n, double alpha, double x_min,
                 double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(x[i] / x_min, -alpha);
}

void exponential_tail(const double* x, std::size_t n, double beta,
                      double x_min, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-beta * (x[i] - x_min));
}

void pareto_quantile(const double* u, std::size_t n, double alpha,
                     double x_min, double* out) {
  const double inv = -1.0 / alpha;
  for (std::size_t i = 0; i < n; ++i) out[i] = x_min * std::pow(u[i], inv);
}

void exponential_quantile(const double* u, std::size_t n, double beta,
                          double x_min, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x_min - std::log(u[i]) / beta;
}

void boltzmann_weights(const double* y, std::size_t n, double beta,
                       double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-beta * y[i]);
}

void q_weights(const double* y, std::size_t n, double slope, double power,
               double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double z = slope * y[i];
    out[i] = z > -1.0 ? std::exp(power * std::log1p(z)) : 0.0;
  }
}

double ks_sup(const double* tail, std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = 1.0 - tail[i];
    const double upper = static_cast<double>(i + 1) * inv_n;
    const double lower = static_cast<double>(i) * inv_n;
    d = std::max(d, std::max(std::abs(upper - g), std::abs(lower - g)));
  }
  return d;
}

constexpr KernelTable kScalar{
    sum,         sum_sq_dev,       dot,
    rank_weighted_sum, sum_log_ratio,
    scale,       log_map,          exp_map,
    pareto_tail, exponential_tail, pareto_quantile,
    exponential_quantile,
    boltzmann_weights, q_weights,
    ks_sup,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace heavytail::simd::detail

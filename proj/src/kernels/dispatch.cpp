#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"
#include "kernel_table.hpp"

namespace heavytail::simd {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(HEAVYTAIL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  const bool avx2 = cpu_has_avx2();
  if (const char* env = std::getenv("HEAVYTAIL_SIMD")) {
    const std::string_view want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && avx2) return Backend::avx2;
  }
  return avx2 ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

const detail::KernelTable& table() noexcept {
#if defined(HEAVYTAIL_HAVE_AVX2)
  if (current().load(std::memory_order_relaxed) == Backend::avx2) {
    return detail::avx2_table();
  }
#endif
  return detail::scalar_table();
}

void require_same_length(std::size_t in, std::size_t out, const char* what) {
  if (in != out) {
    fail(ErrorCode::domain, std::string(what) + ": output length " +
                                std::to_string(out) + " != input length " +
                                std::to_string(in));
  }
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  return backend == Backend::avx2 ? "avx2" : "scalar";
}

bool available(Backend backend) noexcept {
  return backend == Backend::scalar || cpu_has_avx2();
}

Backend active() noexcept { return current().load(std::memory_order_relaxed); }

void select(Backend backend) {
  if (!available(backend)) {
    fail(ErrorCode::config, "SIMD backend '" + std::string(to_string(backend)) +
                                "' is not supported on this CPU");
  }
  current().store(backend, std::memory_order_relaxed);
}

ScopedBackend::ScopedBackend(Backend backend) : previous_(active()) {
  select(backend);
}

ScopedBackend::~ScopedBackend() {
  current().store(previous_, std::memory_order_relaxed);
}

double sum(std::span<const double> x) { return table().sum(x.data(), x.size()); }

double sum_sq_dev(std::span<const double> x, double center) {
  return table().sum_sq_dev(x.data(), x.size(), center);
}

double dot(std::span<const double> a, std::span<const double> b) {
  require_same_length(a.size(), b.size(), "dot");
  return table().dot(a.data(), b.data(), a.size());
}

double rank_weighted_sum(std::span<const double> x) {
  return table().rank_weighted_sum(x.data(), x.size());
}

double sum_log_ratio(std::span<const double> x, double ref) {
  return table().sum_log_ratio(x.data(), x.size(), ref);
}

void scale(std::span<const double> x, double factor, std::span<double> out) {
  require_same_length(x.size(), out.size(), "scale");
  table().scale(x.data(), x.size(), factor, out.data());
}

void log(std::span<const double> x, std::span<double> out) {
  require_same_length(x.size(), out.size(), "log");
  table().log(x.data(), x.size(), out.data());
}

void exp(std::span<const double> x, std::span<double> out) {
  require_same_length(x.size(), out.size(), "exp");
  table().exp(x.data(), x.size(), out.data());
}

void pareto_tail(std::span<const double> x, double alpha, double x_min,
                 std::span<double> out) {
  require_same_length(x.size(), out.size(), "pareto_tail");
  table().pareto_tail(x.data(), x.size(), alpha, x_min, out.data());
}

void exponential_tail(std::span<const double> x, double beta, double x_min,
                      std::span<double> out) {
  require_same_length(x.size(), out.size(), "exponential_tail");
  table().exponential_tail(x.data(), x.size(), beta, x_min, out.data());
}

void pareto_quantile(std::span<const double> u, double alpha, double x_min,
                     std::span<double> out) {
  require_same_length(u.size(), out.size(), "pareto_quantile");
  table().pareto_quantile(u.data(), u.size(), alpha, x_min, out.data());
}

void exponential_quantile(std::span<const double> u, double beta, double x_min,
                          std::span<double> out) {
  require_same_length(u.size(), out.size(), "exponential_quantile");
  table().exponential_quantile(u.data(), u.size(), beta, x_min, out.data());
}

void boltzmann_weights(std::span<const double> y, double beta,
                       std::span<double> out) {
  require_same_length(y.size(), out.size(), "boltzmann_weights");
  table().boltzmann_weights(y.data(), y.size(), beta, out.data());
}

void q_weights(std::span<const double> y, double slope, double power,
               std::span<double> out) {
  require_same_length(y.size(), out.size(), "q_weights");
  table().q_weights(y.data(), y.size(), slope, power, out.data());
}

double ks_sup(std::span<const double> tail_at_sorted) {
  if (tail_at_sorted.empty()) return 0.0;
  return table().ks_sup(tail_at_sorted.data(), tail_at_sorted.size());
}

}  // namespace heavytail::simd

#pragma once

#include <cstddef>

namespace heavytail::simd::detail {

// Raw-pointer entry points; the public span API validates lengths first.
struct KernelTable {
  double (*sum)(const double* x, std::size_t n);
  double (*sum_sq_dev)(const double* x, std::size_t n, double center);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*rank_weighted_sum)(const double* x, std::size_t n);
  double (*sum_log_ratio)(const double* x, std::size_t n, double ref);

  void (*scale)(const double* x, std::size_t n, double factor, double* out);
  void (*log)(const double* x, std::size_t n, double* out);
  void (*exp)(const double* x, std::size_t n, double* out);

  void (*pareto_tail)(const double* x, std::size_t n, double alpha,
                      double x_min, double* out);
  void (*exponential_tail)(const double* x, std::size_t n, double beta,
                           double x_min, double* out);
  void (*pareto_quantile)(const double* u, std::size_t n, double alpha,
                          double x_min, double* out);
  void (*exponential_quantile)(const double* u, std::size_t n, double beta,
                               double x_min, double* out);

  void (*boltzmann_weights)(const double* y, std::size_t n, double beta,
                            double* out);
  void (*q_weights)(const double* y, std::size_t n, double slope, double power,
                    double* out);

  double (*ks_sup)(const double* tail, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
#if defined(HEAVYTAIL_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace heavytail::simd::detail

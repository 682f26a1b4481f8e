// AVX2 + FMA variants of the kernels in scalar.cpp. This translation unit is
// compiled with -mavx2 -mfma and must only be entered after the dispatcher has
// confirmed both features at runtime.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "kernel_table.hpp"

namespace heavytail::simd::detail {
namespace {

constexpr std::size_t kLanes = 4;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline __m256d vabs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

// 2^n for integral n in [-1022, 1023], n held in a double.
inline __m256d pow2_int(__m256d n) {
  const __m256d magic = _mm256_set1_pd(0x1.8p52);
  __m256i bits = _mm256_castpd_si256(_mm256_add_pd(n, magic));
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  return _mm256_castsi256_pd(bits);
}

// Cephes-style exp: reduction by ln 2 in two parts, Pade approximant on the
// remainder, then a two-step power-of-two scale so subnormal results and the
// top of the range stay representable.
inline __m256d vexp(__m256d x) {
  const __m256d hi_limit = _mm256_set1_pd(709.782712893383973096);
  const __m256d lo_limit = _mm256_set1_pd(-745.1332191019412);

  const __m256d overflow = _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo_limit), hi_limit);

  const __m256d n = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), r);

  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(2.00000000000000000009E0));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), _mm256_set1_pd(1.0));

  const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d n2 = _mm256_sub_pd(n, n1);
  e = _mm256_mul_pd(_mm256_mul_pd(e, pow2_int(n1)), pow2_int(n2));

  e = _mm256_blendv_pd(e, _mm256_set1_pd(HUGE_VAL), overflow);
  return _mm256_andnot_pd(underflow, e);
}

// Natural log for positive normal inputs: split off the binary exponent,
// fold the mantissa into [sqrt(1/2), sqrt(2)) and sum the atanh series
// 2 (s + s^3/3 + s^5/5 + ...) with s = (m - 1) / (m + 1).
inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  const __m256i exp_bits = _mm256_or_si256(
      _mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(0x4330000000000000LL));
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(exp_bits),
                            _mm256_set1_pd(4503599627370496.0 + 1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
      _mm256_set1_epi64x(0x3FF0000000000000LL)));

  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.41421356237309504880),
                                    _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  e = _mm256_blendv_pd(e, _mm256_add_pd(e, _mm256_set1_pd(1.0)), big);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 21.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 19.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 17.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 15.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 13.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 11.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 9.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 7.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 5.0));
  poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / 3.0));
  // 2s + 2s^3 * poly, keeping the leading term exact.
  const __m256d two_s = _mm256_add_pd(s, s);
  const __m256d log_m = _mm256_fmadd_pd(_mm256_mul_pd(two_s, s2), poly, two_s);

  const __m256d tail =
      _mm256_fmadd_pd(e, _mm256_set1_pd(1.90821492927058770002e-10), log_m);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(6.93147180369123816490e-01), tail);
}

// log1p via log(1 + z) * z / ((1 + z) - 1); exact where 1 + z rounds to 1.
inline __m256d vlog1p(__m256d z) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d u = _mm256_add_pd(one, z);
  const __m256d du = _mm256_sub_pd(u, one);
  const __m256d is_one = _mm256_cmp_pd(du, _mm256_setzero_pd(), _CMP_EQ_OQ);
  const __m256d safe_du = _mm256_blendv_pd(du, one, is_one);
  const __m256d r = _mm256_mul_pd(vlog(u), _mm256_div_pd(z, safe_du));
  return _mm256_blendv_pd(r, z, is_one);
}

double sum(const double* x, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(x + i + kLanes));
  }
  for (; i + kLanes <= n; i += kLanes) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(x + i));
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += x[i];
  return s;
}

double sum_sq_dev(const double* x, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), c);
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    const double d = x[i] - center;
    s += d * d;
  }
  return s;
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double rank_weighted_sum(const double* x, std::size_t n) {
  __m256d idx = _mm256_setr_pd(1.0, 2.0, 3.0, 4.0);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = _mm256_fmadd_pd(idx, _mm256_loadu_pd(x + i), acc);
    idx = _mm256_add_pd(idx, step);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += static_cast<double>(i + 1) * x[i];
  return s;
}

double sum_log_ratio(const double* x, std::size_t n, double ref) {
  const __m256d r = _mm256_set1_pd(ref);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    acc = _mm256_add_pd(acc, vlog(_mm256_div_pd(_mm256_loadu_pd(x + i), r)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += std::log(x[i] / ref);
  return s;
}

void scale(const double* x, std::size_t n, double factor, double* out) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), f));
  }
  for (; i < n; ++i) out[i] = x[i] * factor;
}

void log_map(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, vlog(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = std::log(x[i]);
}

void exp_map(const double* x, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, vexp(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void pareto_tail(const double* x, std::size_t n, double alpha, double x_min,
                 double* out) {
  const __m256d xm = _mm256_set1_pd(x_min);
  const __m256d neg_alpha = _mm256_set1_pd(-alpha);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d lr = vlog(_mm256_div_pd(_mm256_loadu_pd(x + i), xm));
    _mm256_storeu_pd(out + i, vexp(_mm256_mul_pd(neg_alpha, lr)));
  }
  for (; i < n; ++i) out[i] = std::pow(x[i] / x_min, -alpha);
}

void exponential_tail(const double* x, std::size_t n, double beta,
                      double x_min, double* out) {
  const __m256d xm = _mm256_set1_pd(x_min);
  const __m256d neg_beta = _mm256_set1_pd(-beta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), xm);
    _mm256_storeu_pd(out + i, vexp(_mm256_mul_pd(neg_beta, d)));
  }
  for (; i < n; ++i) out[i] = std::exp(-beta * (x[i] - x_min));
}

void pareto_quantile(const double* u, std::size_t n, double alpha,
                     double x_min, double* out) {
  const double inv = -1.0 / alpha;
  const __m256d vinv = _mm256_set1_pd(inv);
  const __m256d xm = _mm256_set1_pd(x_min);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d lu = vlog(_mm256_loadu_pd(u + i));
    _mm256_storeu_pd(out + i, _mm256_mul_pd(xm, vexp(_mm256_mul_pd(vinv, lu))));
  }
  for (; i < n; ++i) out[i] = x_min * std::pow(u[i], inv);
}

void exponential_quantile(const double* u, std::size_t n, double beta,
                          double x_min, double* out) {
  const __m256d b = _mm256_set1_pd(beta);
  const __m256d xm = _mm256_set1_pd(x_min);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d lu = vlog(_mm256_loadu_pd(u + i));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(xm, _mm256_div_pd(lu, b)));
  }
  for (; i < n; ++i) out[i] = x_min - std::log(u[i]) / beta;
}

void boltzmann_weights(const double* y, std::size_t n, double beta,
                       double* out) {
  const __m256d neg_beta = _mm256_set1_pd(-beta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(out + i, vexp(_mm256_mul_pd(neg_beta, _mm256_loadu_pd(y + i))));
  }
  for (; i < n; ++i) out[i] = std::exp(-beta * y[i]);
}

void q_weights(const double* y, std::size_t n, double slope, double power,
               double* out) {
  const __m256d vs = _mm256_set1_pd(slope);
  const __m256d vp = _mm256_set1_pd(power);
  const __m256d minus_one = _mm256_set1_pd(-1.0);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d z = _mm256_mul_pd(vs, _mm256_loadu_pd(y + i));
    const __m256d inside = _mm256_cmp_pd(z, minus_one, _CMP_GT_OQ);
    z = _mm256_blendv_pd(_mm256_setzero_pd(), z, inside);
    const __m256d w = vexp(_mm256_mul_pd(vp, vlog1p(z)));
    _mm256_storeu_pd(out + i, _mm256_and_pd(w, inside));
  }
  for (; i < n; ++i) {
    const double z = slope * y[i];
    out[i] = z > -1.0 ? std::exp(power * std::log1p(z)) : 0.0;
  }
}

double ks_sup(const double* tail, std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  const __m256d vinv = _mm256_set1_pd(inv_n);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d g = _mm256_sub_pd(one, _mm256_loadu_pd(tail + i));
    const __m256d lower = _mm256_mul_pd(idx, vinv);
    const __m256d upper = _mm256_mul_pd(_mm256_add_pd(idx, one), vinv);
    best = _mm256_max_pd(best, vabs(_mm256_sub_pd(upper, g)));
    best = _mm256_max_pd(best, vabs(_mm256_sub_pd(lower, g)));
    idx = _mm256_add_pd(idx, step);
  }
  double d = hmax(best);
  for (; i < n; ++i) {
    const double g = 1.0 - tail[i];
    const double upper = static_cast<double>(i + 1) * inv_n;
    const double lower = static_cast<double>(i) * inv_n;
    d = std::max(d, std::max(std::abs(upper - g), std::abs(lower - g)));
  }
  return d;
}

constexpr KernelTable kAvx2{
    sum,         sum_sq_dev,       dot,
    rank_weighted_sum, sum_log_ratio,
    scale,       log_map,          exp_map,
    pareto_tail, exponential_tail, pareto_quantile,
    exponential_quantile,
    boltzmann_weights, q_weights,
    ks_sup,
};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace heavytail::simd::detail

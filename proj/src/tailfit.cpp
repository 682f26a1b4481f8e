#include "heavytail/tailfit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"

namespace heavytail::tailfit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_tail_size(const TailSelection& tail, std::size_t min_tail) {
  if (tail.n_tail() < std::max<std::size_t>(min_tail, 1)) {
    fail(ErrorCode::insufficient_tail,
         "tail above cutoff " + format_double(tail.cutoff) + " has " +
             std::to_string(tail.n_tail()) + " values, at least " +
             std::to_string(min_tail) + " needed");
  }
}

void require_positive_cutoff(const TailSelection& tail) {
  if (!(tail.cutoff > 0.0)) {
    fail(ErrorCode::domain, "power-law fits need a positive cutoff");
  }
}

}  // namespace

TailSelection select_tail(const Sample& sample, double cutoff) {
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) {
    fail(ErrorCode::domain, "cutoff must be a non-negative number");
  }
  TailSelection sel;
  sel.cutoff = cutoff;
  sel.n_total = sample.size();
  for (double v : sample.values()) {
    if (v >= cutoff) sel.tail_values.push_back(v);
  }
  std::sort(sel.tail_values.begin(), sel.tail_values.end());
  return sel;
}

TailSelection make_tail(std::vector<double> values, double cutoff) {
  std::sort(values.begin(), values.end());
  if (!values.empty() && !(values.front() >= cutoff)) {
    fail(ErrorCode::domain, "tail value " + format_double(values.front()) +
                                " lies below the cutoff " + format_double(cutoff));
  }
  TailSelection sel;
  sel.cutoff = cutoff;
  sel.n_total = values.size();
  sel.tail_values = std::move(values);
  return sel;
}

LineFit ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::domain, "ols: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorCode::insufficient_tail, "ols needs at least two points");
  const double mx = simd::sum(x) / static_cast<double>(n);
  const double my = simd::sum(y) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) fail(ErrorCode::zero_variance, "ols: all x values are equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ssr = std::max(0.0, syy - fit.slope * sxy);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.slope_std_error =
      n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : kNaN;
  return fit;
}

LineFit ols_through_origin(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) fail(ErrorCode::domain, "ols: length mismatch");
  const std::size_t n = x.size();
  const double sxx = simd::dot(x, x);
  if (n == 0 || !(sxx > 0.0)) {
    fail(ErrorCode::zero_variance, "regression through the origin needs a non-zero x");
  }
  const double sxy = simd::dot(x, y);
  const double syy = simd::dot(y, y);
  LineFit fit;
  fit.slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.slope * x[i];
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  fit.slope_std_error =
      n > 1 ? std::sqrt(ssr / static_cast<double>(n - 1) / sxx) : kNaN;
  return fit;
}

double hill_estimate(std::span<const double> values, double cutoff) {
  if (values.empty()) fail(ErrorCode::insufficient_tail, "no values above the cutoff");
  if (!(cutoff > 0.0)) fail(ErrorCode::domain, "Hill estimator needs a positive cutoff");
  const double s = simd::sum_log_ratio(values, cutoff);
  if (!(s > 0.0)) {
    fail(ErrorCode::divergent_estimate,
         "all tail values equal the cutoff; the exponent is unbounded");
  }
  return static_cast<double>(values.size()) / s;
}

TailFit fit_power_mle(const TailSelection& tail, std::size_t min_tail) {
  require_tail_size(tail, min_tail);
  require_positive_cutoff(tail);
  TailFit fit;
  fit.family = dist::Family::pareto;
  fit.method = Method::mle;
  fit.exponent = hill_estimate(tail.tail_values, tail.cutoff);
  fit.cutoff = tail.cutoff;
  fit.n_points = tail.n_tail();
  fit.std_error = fit.exponent / std::sqrt(static_cast<double>(fit.n_points));
  return fit;
}

TailFit fit_power_regression(const TailSelection& tail, std::size_t min_tail) {
  require_tail_size(tail, min_tail);
  require_positive_cutoff(tail);
  const auto& v = tail.tail_values;
  const std::size_t n = v.size();
  std::vector<double> lx(n), ly(n);
  simd::log(v, lx);
  for (std::size_t i = 0; i < n; ++i) {
    ly[i] = std::log(static_cast<double>(n - i) / static_cast<double>(n));
  }
  if (lx.front() == lx.back()) {
    fail(ErrorCode::divergent_estimate,
         "all tail values are equal; the log-log slope is undefined");
  }
  const LineFit line = ols(lx, ly);
  if (!(line.slope < 0.0)) {
    fail(ErrorCode::divergent_estimate, "log-log tail slope is not negative");
  }
  TailFit fit;
  fit.family = dist::Family::pareto;
  fit.method = Method::regression;
  fit.exponent = -line.slope;
  fit.cutoff = tail.cutoff;
  fit.r_squared = line.r_squared;
  fit.std_error = line.slope_std_error;
  fit.n_points = n;
  return fit;
}

TailFit fit_exponential(const Sample& sample, std::optional<double> fixed_intercept_at) {
  return fit_exponential(sample.values(), fixed_intercept_at);
}

TailFit fit_exponential(std::span<const double> values,
                        std::optional<double> fixed_intercept_at) {
  std::vector<double> v;
  if (fixed_intercept_at) {
    for (double x : values) {
      if (x >= *fixed_intercept_at) v.push_back(x);
    }
  } else {
    v.assign(values.begin(), values.end());
  }
  if (v.empty()) {
    fail(ErrorCode::empty_input, "no values at or above the exponential anchor");
  }
  std::sort(v.begin(), v.end());
  if (v.front() == v.back()) {
    fail(ErrorCode::zero_variance, "exponential fit of a constant sample");
  }

  TailFit fit;
  fit.family = dist::Family::exponential;
  if (!fixed_intercept_at) {
    const double n = static_cast<double>(v.size());
    const double m = simd::sum(v) / n;
    fit.method = Method::mle;
    fit.exponent = 1.0 / (m - v.front());
    fit.cutoff = v.front();
    fit.n_points = v.size();
    fit.std_error = fit.exponent / std::sqrt(n);
    return fit;
  }

  const double b0 = *fixed_intercept_at;
  const TailCurve curve = empirical_tail_distinct(v);
  std::vector<double> dx, ly;
  for (std::size_t i = 0; i < curve.x.size(); ++i) {
    if (curve.x[i] > b0) {
      dx.push_back(curve.x[i] - b0);
      ly.push_back(std::log(curve.tail[i]));
    }
  }
  const LineFit line = ols_through_origin(dx, ly);
  if (!(line.slope < 0.0)) {
    fail(ErrorCode::divergent_estimate, "empirical tail does not decay");
  }
  fit.method = Method::regression;
  fit.exponent = -line.slope;
  fit.cutoff = b0;
  fit.r_squared = line.r_squared;
  fit.std_error = line.slope_std_error;
  fit.n_points = dx.size();
  return fit;
}

ZipfFit fit_zipf(const Sample& sample, std::size_t top_k) {
  if (top_k < 3) fail(ErrorCode::config, "top_k must be at least 3");
  if (top_k > sample.size()) {
    fail(ErrorCode::range, "top_k = " + std::to_string(top_k) +
                               " exceeds the sample length " +
                               std::to_string(sample.size()));
  }
  std::vector<double> sorted(sample.values().begin(), sample.values().end());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  sorted.resize(top_k);
  std::vector<double> lr(top_k), lv(top_k);
  for (std::size_t r = 0; r < top_k; ++r) lr[r] = std::log(static_cast<double>(r + 1));
  simd::log(sorted, lv);
  const LineFit line = ols(lr, lv);
  if (!(line.slope < 0.0)) {
    fail(ErrorCode::divergent_estimate, "rank-size relation is flat over the top " +
                                            std::to_string(top_k) + " values");
  }
  return {-line.slope, top_k, line.intercept, line.r_squared};
}

TailFit refit(const TailFit& like, const TailSelection& tail) {
  if (like.family == dist::Family::pareto) {
    return like.method == Method::mle ? fit_power_mle(tail, 1)
                                      : fit_power_regression(tail, 2);
  }
  if (like.method == Method::regression) {
    return fit_exponential(tail.tail_values, like.cutoff);
  }
  // Shifted-exponential MLE with the support bound held at the original cutoff.
  const double n = static_cast<double>(tail.n_tail());
  const double m = simd::sum(tail.tail_values) / n;
  if (!(m > like.cutoff)) {
    fail(ErrorCode::divergent_estimate, "replicate mean equals the cutoff");
  }
  TailFit fit = like;
  fit.exponent = 1.0 / (m - like.cutoff);
  fit.std_error = fit.exponent / std::sqrt(n);
  fit.n_points = tail.n_tail();
  return fit;
}

dist::DistributionSpec to_spec(const TailFit& fit) {
  if (fit.family == dist::Family::pareto) {
    return dist::DistributionSpec::pareto(fit.exponent, fit.cutoff);
  }
  return dist::DistributionSpec::exponential(fit.exponent, fit.cutoff);
}

TailCurve empirical_tail(std::span<const double> sorted_values) {
  const std::size_t n = sorted_values.size();
  TailCurve c;
  c.x.assign(sorted_values.begin(), sorted_values.end());
  c.tail.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.tail[i] = static_cast<double>(n - i) / static_cast<double>(n);
  }
  return c;
}

TailCurve empirical_tail_distinct(std::span<const double> sorted_values) {
  const std::size_t n = sorted_values.size();
  TailCurve c;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == 0 || sorted_values[i] != sorted_values[i - 1]) {
      c.x.push_back(sorted_values[i]);
      c.tail.push_back(static_cast<double>(n - i) / static_cast<double>(n));
    }
  }
  return c;
}

}  // namespace heavytail::tailfit

#include "heavytail/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"

namespace heavytail::concentration {
namespace {

std::vector<double> sorted_descending(const Sample& sample) {
  std::vector<double> v(sample.values().begin(), sample.values().end());
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// v sorted ascending.
double sorted_gini(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double total = simd::sum(v);
  return std::clamp(2.0 * simd::rank_weighted_sum(v) / (n * total) - (n + 1.0) / n,
                    0.0, 1.0);
}

}  // namespace

double gini(std::span<const double> values) {
  if (values.empty()) fail(ErrorCode::empty_input, "gini of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return sorted_gini(v);
}

LorenzCurve lorenz(const Sample& sample) {
  std::vector<double> v(sample.values().begin(), sample.values().end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  const double total = simd::sum(v);

  LorenzCurve curve;
  curve.points.reserve(n + 1);
  curve.points.push_back({0.0, 0.0});
  double partial = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    partial += v[k - 1];
    const double p = static_cast<double>(k) / static_cast<double>(n);
    curve.points.push_back({p, k == n ? 1.0 : std::min(p, partial / total)});
  }
  curve.gini = sorted_gini(v);
  return curve;
}

double top_share(const Sample& sample, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    fail(ErrorCode::domain, "top-share fraction must lie in (0, 1], got " +
                                format_double(fraction));
  }
  const std::vector<double> v = sorted_descending(sample);
  const double n = static_cast<double>(v.size());
  // Offset guards against products such as 0.07 * 100 = 7.000000000000001.
  auto k = static_cast<std::size_t>(std::ceil(fraction * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, v.size());
  const std::span<const double> all(v);
  return simd::sum(all.first(k)) / simd::sum(all);
}

double pareto_rule_check(const Sample& sample) {
  const std::vector<double> v = sorted_descending(sample);
  const double total = simd::sum(v);
  const double target = 0.8 * total;
  const double slack = 1e-12 * total;
  double held = 0.0;
  for (std::size_t k = 1; k <= v.size(); ++k) {
    held += v[k - 1];
    if (held >= target - slack) {
      return static_cast<double>(k) / static_cast<double>(v.size());
    }
  }
  return 1.0;
}

}  // namespace heavytail::concentration

#include "heavytail/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"
#include "heavytail/rng.hpp"

namespace heavytail::dist {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::domain, std::string(name) + " must be positive and finite, got " +
                                format_double(v));
  }
}

void require_support(const DistributionSpec& spec, double x) {
  if (!(x >= spec.x_min())) {
    fail(ErrorCode::domain, "x = " + format_double(x) + " lies below x_min = " +
                                format_double(spec.x_min()));
  }
}

// q-exponential pieces, with y = x - x_min >= 0.
double q_log_bracket(double q, double scale, double y) {
  return std::log1p((q - 1.0) * y / scale);
}

}  // namespace

std::string_view to_string(Family family) noexcept {
  switch (family) {
    case Family::exponential: return "exponential";
    case Family::pareto: return "pareto";
    case Family::q_exponential: return "q_exponential";
  }
  return "unknown";
}

DistributionSpec DistributionSpec::exponential(double beta, double x_min) {
  require_positive(beta, "rate beta");
  if (!(x_min >= 0.0) || !std::isfinite(x_min)) {
    fail(ErrorCode::domain, "x_min must be non-negative");
  }
  DistributionSpec spec(Family::exponential, x_min);
  spec.beta_ = beta;
  return spec;
}

DistributionSpec DistributionSpec::pareto(double alpha, double x_min) {
  require_positive(alpha, "exponent alpha");
  require_positive(x_min, "pareto x_min");
  DistributionSpec spec(Family::pareto, x_min);
  spec.alpha_ = alpha;
  return spec;
}

DistributionSpec DistributionSpec::q_exponential(double q, double scale,
                                                 double x_min) {
  if (!(q > 1.0 && q < 2.0)) {
    fail(ErrorCode::domain,
         "entropic index q must lie in (1, 2) for a normalizable q-exponential, got " +
             format_double(q));
  }
  require_positive(scale, "scale");
  if (!(x_min >= 0.0) || !std::isfinite(x_min)) {
    fail(ErrorCode::domain, "x_min must be non-negative");
  }
  DistributionSpec spec(Family::q_exponential, x_min);
  spec.q_ = q;
  spec.scale_ = scale;
  return spec;
}

DistributionSpec DistributionSpec::with_x_min(double x_min) const {
  switch (family_) {
    case Family::exponential: return exponential(*beta_, x_min);
    case Family::pareto: return pareto(*alpha_, x_min);
    case Family::q_exponential: return q_exponential(*q_, *scale_, x_min);
  }
  return *this;
}

double tail_function(const DistributionSpec& spec, double x) {
  require_support(spec, x);
  const double y = x - spec.x_min();
  switch (spec.family()) {
    case Family::exponential:
      return std::exp(-*spec.rate_beta() * y);
    case Family::pareto:
      return std::pow(x / spec.x_min(), -*spec.exponent_alpha());
    case Family::q_exponential: {
      const double q = *spec.entropic_q();
      return std::exp(-(2.0 - q) / (q - 1.0) * q_log_bracket(q, *spec.scale(), y));
    }
  }
  return 0.0;
}

void tail_function(const DistributionSpec& spec, std::span<const double> x,
                   std::span<double> out) {
  if (x.size() != out.size()) fail(ErrorCode::domain, "tail_function: length mismatch");
  if (x.empty()) return;
  require_support(spec, *std::min_element(x.begin(), x.end()));
  switch (spec.family()) {
    case Family::exponential:
      simd::exponential_tail(x, *spec.rate_beta(), spec.x_min(), out);
      return;
    case Family::pareto:
      simd::pareto_tail(x, *spec.exponent_alpha(), spec.x_min(), out);
      return;
    case Family::q_exponential:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = tail_function(spec, x[i]);
      return;
  }
}

double density(const DistributionSpec& spec, double x) {
  require_support(spec, x);
  const double y = x - spec.x_min();
  switch (spec.family()) {
    case Family::exponential: {
      const double beta = *spec.rate_beta();
      return beta * std::exp(-beta * y);
    }
    case Family::pareto: {
      const double alpha = *spec.exponent_alpha();
      return alpha / x * std::pow(x / spec.x_min(), -alpha);
    }
    case Family::q_exponential: {
      const double q = *spec.entropic_q();
      const double scale = *spec.scale();
      return (2.0 - q) / scale *
             std::exp(-q_log_bracket(q, scale, y) / (q - 1.0));
    }
  }
  return 0.0;
}

double quantile(const DistributionSpec& spec, double u) {
  if (!(u > 0.0 && u <= 1.0)) {
    fail(ErrorCode::domain, "quantile level must lie in (0, 1], got " + format_double(u));
  }
  switch (spec.family()) {
    case Family::exponential:
      return spec.x_min() - std::log(u) / *spec.rate_beta();
    case Family::pareto:
      return spec.x_min() * std::pow(u, -1.0 / *spec.exponent_alpha());
    case Family::q_exponential: {
      const double q = *spec.entropic_q();
      const double scale = *spec.scale();
      return spec.x_min() +
             scale / (q - 1.0) * std::expm1(-(q - 1.0) / (2.0 - q) * std::log(u));
    }
  }
  return spec.x_min();
}

double tail_exponent(const DistributionSpec& spec) {
  switch (spec.family()) {
    case Family::pareto: return *spec.exponent_alpha();
    case Family::q_exponential: {
      const double q = *spec.entropic_q();
      return (2.0 - q) / (q - 1.0);
    }
    case Family::exponential: break;
  }
  fail(ErrorCode::domain, "the exponential family has no power-law tail exponent");
}

double mean(const DistributionSpec& spec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (spec.family()) {
    case Family::exponential:
      return spec.x_min() + 1.0 / *spec.rate_beta();
    case Family::pareto: {
      const double alpha = *spec.exponent_alpha();
      return alpha > 1.0 ? alpha * spec.x_min() / (alpha - 1.0) : inf;
    }
    case Family::q_exponential: {
      const double q = *spec.entropic_q();
      return q < 1.5 ? spec.x_min() + *spec.scale() / (3.0 - 2.0 * q) : inf;
    }
  }
  return inf;
}

void draw(const DistributionSpec& spec, std::uint64_t seed, std::span<double> out) {
  UniformStream uniforms(seed);
  uniforms.fill(out);
  switch (spec.family()) {
    case Family::exponential:
      simd::exponential_quantile(out, *spec.rate_beta(), spec.x_min(), out);
      return;
    case Family::pareto:
      simd::pareto_quantile(out, *spec.exponent_alpha(), spec.x_min(), out);
      return;
    case Family::q_exponential:
      for (double& v : out) v = quantile(spec, v);
      return;
  }
}

Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::domain, "sample size must be at least 1");
  std::vector<double> values(n);
  draw(spec, seed, values);
  // x_min = 0 exponentials can only hit 0 if u rounds to 1, which the open
  // uniform interval excludes.
  return Sample(std::move(values), SampleKind::synthetic);
}

}  // namespace heavytail::dist

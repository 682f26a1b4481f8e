#include "heavytail/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heavytail/error.hpp"
#include "heavytail/kernels.hpp"
#include "heavytail/rng.hpp"

namespace heavytail::maxent {
namespace {

constexpr double kBetaLimit = 1e250;
constexpr std::size_t kMaxBisections = 4000;

// Weights and mean of the normalized family for one value of the scaled
// inverse temperature t = beta * (m_N - m_1).
class FamilyEvaluator {
 public:
  FamilyEvaluator(std::span<const double> levels, Entropy entropy, double q)
      : levels_(levels), entropy_(entropy), q_(q), span_(levels.back() - levels.front()) {
    const std::size_t n = levels.size();
    from_low_.resize(n);
    from_high_.resize(n);
    weights_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      from_low_[i] = (levels[i] - levels.front()) / span_;
      from_high_[i] = (levels[i] - levels.back()) / span_;
    }
  }

  double span() const noexcept { return span_; }
  double reference(double t) const noexcept {
    return t >= 0.0 ? levels_.front() : levels_.back();
  }

  // Fills the weights for t and returns sum(w).
  double weigh(double t) {
    const std::span<const double> y = t >= 0.0 ? from_low_ : from_high_;
    if (entropy_ == Entropy::shannon) {
      simd::boltzmann_weights(y, t, weights_);
    } else {
      simd::q_weights(y, -(q_ - 1.0) * t, 1.0 / (q_ - 1.0), weights_);
    }
    return simd::sum(weights_);
  }

  double mean(double t) {
    const double z = weigh(t);
    return simd::dot(weights_, levels_) / z;
  }

  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::span<const double> levels_;
  Entropy entropy_;
  double q_;
  double span_;
  std::vector<double> from_low_;
  std::vector<double> from_high_;
  std::vector<double> weights_;
};

MaxEntSolution solve_family(const MaxEntProblem& problem) {
  problem.validate();
  const auto& m = problem.levels;
  const double target = problem.target_mean;
  FamilyEvaluator eval(m, problem.entropy, problem.q);

  std::size_t iterations = 0;
  double t = 0.0;
  const double uniform_mean = eval.mean(0.0);
  if (uniform_mean != target) {
    // mean(t) decreases in t; find a bracket on the side of the target.
    const double sign = target < uniform_mean ? 1.0 : -1.0;
    double inner = 0.0;
    double outer = sign;
    auto beyond = [&](double mu) { return sign > 0 ? mu <= target : mu >= target; };
    while (!beyond(eval.mean(outer))) {
      inner = outer;
      outer *= 2.0;
      ++iterations;
      if (std::abs(outer) > kBetaLimit) {
        fail(ErrorCode::solver_failure,
             "no bracket for the mean constraint: target " + format_double(target) +
                 " is numerically indistinguishable from a boundary level");
      }
    }
    // Invariant: mean(inner) on the near side of target, mean(outer) beyond.
    double best_t = outer;
    double best_err = std::abs(eval.mean(outer) - target);
    for (std::size_t k = 0; k < kMaxBisections; ++k) {
      const double mid = 0.5 * (inner + outer);
      if (mid == inner || mid == outer) break;
      const double mu = eval.mean(mid);
      ++iterations;
      const double err = std::abs(mu - target);
      if (err < best_err) {
        best_err = err;
        best_t = mid;
      }
      if (mu == target) break;
      if (beyond(mu)) {
        outer = mid;
      } else {
        inner = mid;
      }
    }
    t = best_t;
  }

  const double z = eval.weigh(t);
  MaxEntSolution sol;
  sol.entropy = problem.entropy;
  sol.q = problem.entropy == Entropy::shannon ? 1.0 : problem.q;
  sol.levels = m;
  sol.probabilities.resize(m.size());
  simd::scale(eval.weights(), 1.0 / z, sol.probabilities);
  sol.beta = t / eval.span();
  sol.reference_level = eval.reference(t);
  sol.target_mean = target;
  sol.achieved_mean = simd::dot(sol.probabilities, m);
  sol.iterations = iterations;
  sol.entropy_value = entropy_value(sol.probabilities, problem.entropy, sol.q);

  if (problem.entropy == Entropy::shannon) {
    // ln p_i = -beta (m_i - m_ref) - ln z = -kappa m_i + lambda - 1
    sol.kappa = sol.beta;
    sol.lambda = 1.0 + sol.beta * sol.reference_level - std::log(z);
  } else {
    // p_i^(q-1) = z^(1-q) (1 - (q-1) beta (m_i - m_ref)) = -(q-1)/q (lambda + kappa m_i)
    const double q = problem.q;
    const double zq = std::exp((1.0 - q) * std::log(z));
    sol.kappa = q * sol.beta * zq;
    sol.lambda = -q * zq * (1.0 + (q - 1.0) * sol.beta * sol.reference_level) / (q - 1.0);
  }

  if (std::abs(sol.achieved_mean - target) > kMeanTolerance * target) {
    fail(ErrorCode::solver_failure,
         "mean constraint missed: achieved " + format_double(sol.achieved_mean) +
             " for target " + format_double(target) + " after " +
             std::to_string(iterations) + " iterations (beta " +
             format_double(sol.beta) + ")");
  }
  return sol;
}

}  // namespace

std::string_view to_string(Entropy entropy) noexcept {
  return entropy == Entropy::shannon ? "shannon" : "tsallis";
}

void MaxEntProblem::validate() const {
  if (levels.size() < 2) fail(ErrorCode::domain, "at least two levels are required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0) || !std::isfinite(levels[i])) {
      fail(ErrorCode::domain, "level #" + std::to_string(i) + " is not positive");
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      fail(ErrorCode::domain, "levels must be strictly increasing (index " +
                                  std::to_string(i) + ")");
    }
  }
  if (entropy == Entropy::tsallis && (!(q > 0.0) || q == 1.0 || !std::isfinite(q))) {
    fail(ErrorCode::domain, "Tsallis index q must be positive and different from 1, got " +
                                format_double(q));
  }
  if (!(target_mean > levels.front() && target_mean < levels.back())) {
    fail(ErrorCode::infeasible, "target mean " + format_double(target_mean) +
                                    " lies outside the open level range (" +
                                    format_double(levels.front()) + ", " +
                                    format_double(levels.back()) + ")");
  }
}

double entropy_value(std::span<const double> probabilities, Entropy entropy, double q) {
  if (probabilities.empty()) fail(ErrorCode::domain, "empty probability vector");
  for (double p : probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      fail(ErrorCode::domain, "probabilities must be non-negative and finite");
    }
  }
  const double total = simd::sum(probabilities);
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::domain, "probabilities sum to " + format_double(total));
  }
  if (entropy == Entropy::shannon) {
    double s = 0.0;
    for (double p : probabilities) {
      if (p > 0.0) s -= p * std::log(p);
    }
    return s;
  }
  if (!(q > 0.0) || q == 1.0) {
    fail(ErrorCode::domain, "Tsallis index q must be positive and different from 1");
  }
  double sq = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) sq += std::pow(p, q);
  }
  return (1.0 - sq) / (q - 1.0);
}

MaxEntSolution solve_shannon(const MaxEntProblem& problem) {
  if (problem.entropy != Entropy::shannon) {
    fail(ErrorCode::config, "solve_shannon called with a Tsallis problem");
  }
  return solve_family(problem);
}

MaxEntSolution solve_tsallis(const MaxEntProblem& problem) {
  if (problem.entropy != Entropy::tsallis) {
    fail(ErrorCode::config, "solve_tsallis called with a Shannon problem");
  }
  return solve_family(problem);
}

MaxEntSolution solve(const MaxEntProblem& problem) {
  return problem.entropy == Entropy::shannon ? solve_shannon(problem)
                                             : solve_tsallis(problem);
}

MaxEntSolution boltzmann(std::span<const double> levels, double kappa) {
  if (levels.size() < 2) fail(ErrorCode::domain, "at least two levels are required");
  const double ref = kappa >= 0.0 ? levels.front() : levels.back();
  std::vector<double> y(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) y[i] = levels[i] - ref;
  MaxEntSolution sol;
  sol.levels.assign(levels.begin(), levels.end());
  sol.probabilities.resize(levels.size());
  simd::boltzmann_weights(y, kappa, sol.probabilities);
  const double z = simd::sum(sol.probabilities);
  simd::scale(sol.probabilities, 1.0 / z, sol.probabilities);
  sol.kappa = kappa;
  sol.beta = kappa;
  sol.reference_level = ref;
  sol.lambda = 1.0 + kappa * ref - std::log(z);
  sol.achieved_mean = simd::dot(sol.probabilities, levels);
  sol.target_mean = sol.achieved_mean;
  sol.entropy_value = entropy_value(sol.probabilities, Entropy::shannon);
  return sol;
}

Sample generate_synthetic(const MaxEntSolution& solution, std::size_t n,
                          std::uint64_t seed) {
  if (n == 0) fail(ErrorCode::domain, "sample size must be at least 1");
  const auto& p = solution.probabilities;
  if (p.empty() || p.size() != solution.levels.size()) {
    fail(ErrorCode::domain, "solution has no probability vector");
  }
  std::vector<double> cumulative(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cumulative[i] = acc;
  }
  UniformStream uniforms(seed);
  std::vector<double> out(n);
  for (double& v : out) {
    const double u = uniforms.next() * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    v = solution.levels[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return Sample(std::move(out), SampleKind::synthetic);
}

std::vector<double> log_spaced_levels(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    fail(ErrorCode::domain, "log-spaced levels need 0 < lo < hi and count >= 2");
  }
  std::vector<double> levels(count);
  const double ratio = std::log(hi / lo);
  for (std::size_t k = 0; k < count; ++k) {
    levels[k] = lo * std::exp(ratio * static_cast<double>(k) /
                              static_cast<double>(count - 1));
  }
  levels.front() = lo;
  levels.back() = hi;
  return levels;
}

std::vector<double> linear_levels(double first, double step, std::size_t count) {
  if (!(first > 0.0) || !(step > 0.0) || count < 2) {
    fail(ErrorCode::domain, "linear levels need first > 0, step > 0 and count >= 2");
  }
  std::vector<double> levels(count);
  for (std::size_t k = 0; k < count; ++k) {
    levels[k] = first + step * static_cast<double>(k);
  }
  return levels;
}

double tsallis_tail_exponent(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    fail(ErrorCode::domain, "only 0 < q < 1 Tsallis solutions have a power-law tail");
  }
  return 1.0 / (1.0 - q) - 1.0;
}

double tsallis_q_for_tail_exponent(double alpha) {
  if (!(alpha > 0.0)) fail(ErrorCode::domain, "tail exponent must be positive");
  return 1.0 - 1.0 / (alpha + 1.0);
}

}  // namespace heavytail::maxent

#pragma once

// Maximum-entropy distributions over a discrete grid of levels m_1 < ... < m_N
// under normalization and a fixed mean,
//
//   maximize S(p)  subject to  sum p_i = 1,  sum p_i m_i = target_mean,
//
// with S either the Shannon entropy -sum p ln p or the Tsallis entropy
// (1 - sum p^q) / (q - 1).
//
// Shannon optimum: p_i = exp(-kappa m_i + lambda - 1) (Maxwell-Boltzmann).
//
// Tsallis optimum: stationarity of the Lagrangian
//   (1 - sum p^q)/(q - 1) - lambda (sum p - 1) - kappa (sum p m - target)
// gives p_i^(q-1) = -(q - 1)/q (lambda + kappa m_i), clipped at p_i = 0 for
// q > 1. Solutions are computed in the normalized form
//   p_i ∝ [1 - (q - 1) beta (m_i - m_ref)]_+^(1/(q-1)),
// which tends to exp(-beta (m_i - m_ref)) as q -> 1. For q < 1 this is the
// power law (A + kappa m)^(-1/(1-q)); on a uniformly spaced grid its
// tail-function exponent is 1/(1-q) - 1 (see tsallis_tail_exponent).
//
// Both problems reduce to one monotone equation mean(beta) = target, solved by
// bracketing and bisection. m_ref is m_1 for beta >= 0 and m_N for beta < 0 so
// the bracket never leaves (0, 1] and weights never overflow.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "heavytail/sample.hpp"

namespace heavytail::maxent {

enum class Entropy { shannon, tsallis };

std::string_view to_string(Entropy entropy) noexcept;

inline constexpr std::size_t kDefaultLevelCount = 64;
inline constexpr double kMeanTolerance = 1e-10;  // relative to target

struct MaxEntProblem {
  std::vector<double> levels;  // strictly increasing, positive
  double target_mean = 0.0;    // strictly inside (levels.front(), levels.back())
  Entropy entropy = Entropy::shannon;
  double q = 1.0;  // tsallis only: q > 0, q != 1

  /// Throws Error(domain) for malformed levels or q, Error(infeasible) for a
  /// target outside the open level range.
  void validate() const;
};

struct MaxEntSolution {
  Entropy entropy = Entropy::shannon;
  double q = 1.0;
  std::vector<double> levels;
  std::vector<double> probabilities;
  double kappa = 0.0;   // Lagrange multiplier of the mean constraint
  double lambda = 0.0;  // Lagrange multiplier of the normalization
  double beta = 0.0;    // inverse temperature of the normalized form
  double reference_level = 0.0;
  double target_mean = 0.0;
  double achieved_mean = 0.0;
  double entropy_value = 0.0;
  std::size_t iterations = 0;
};

/// Shannon (0 ln 0 := 0) or Tsallis entropy. Throws Error(domain) unless all
/// p_i >= 0 and |sum p - 1| <= 1e-9.
double entropy_value(std::span<const double> probabilities, Entropy entropy,
                     double q = 1.0);

MaxEntSolution solve_shannon(const MaxEntProblem& problem);
MaxEntSolution solve_tsallis(const MaxEntProblem& problem);
MaxEntSolution solve(const MaxEntProblem& problem);

/// Boltzmann distribution p_i ∝ exp(-kappa m_i) evaluated forward, for
/// building targets and test fixtures.
MaxEntSolution boltzmann(std::span<const double> levels, double kappa);

/// n i.i.d. draws of levels with the solution's probabilities, by inverse
/// transform on the cumulative distribution.
Sample generate_synthetic(const MaxEntSolution& solution, std::size_t n,
                          std::uint64_t seed);

/// `count` geometrically spaced levels from lo to hi inclusive.
std::vector<double> log_spaced_levels(double lo, double hi,
                                      std::size_t count = kDefaultLevelCount);
/// first, first + step, ..., count levels.
std::vector<double> linear_levels(double first, double step, std::size_t count);

/// Tail-function exponent of the q < 1 Tsallis solution on a uniform grid,
/// 1/(1 - q) - 1. Throws Error(domain) for q >= 1 (no power-law tail).
double tsallis_tail_exponent(double q);
/// Inverse of tsallis_tail_exponent: q = 1 - 1/(alpha + 1).
double tsallis_q_for_tail_exponent(double alpha);

}  // namespace heavytail::maxent

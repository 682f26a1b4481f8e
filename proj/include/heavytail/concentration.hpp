#pragma once

#include <span>
#include <vector>

#include "heavytail/sample.hpp"

namespace heavytail::concentration {

struct LorenzPoint {
  double population_share = 0.0;
  double money_share = 0.0;
};

/// n + 1 points from (0, 0) to (1, 1), values sorted ascending.
struct LorenzCurve {
  std::vector<LorenzPoint> points;
  double gini = 0.0;
};

LorenzCurve lorenz(const Sample& sample);

/// Gini from the sorted-array identity 2 sum(i x_(i)) / (n sum x) - (n + 1) / n.
double gini(std::span<const double> values);

/// Share of the total held by the ceil(fraction * n) largest values.
/// Throws Error(domain) unless 0 < fraction <= 1.
double top_share(const Sample& sample, double fraction);

/// Smallest population fraction k / n whose k largest members hold at least
/// 80% of the total.
double pareto_rule_check(const Sample& sample);

}  // namespace heavytail::concentration

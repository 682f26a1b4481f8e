#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "heavytail/distributions.hpp"
#include "heavytail/error.hpp"
#include "heavytail/gof.hpp"
#include "heavytail/rng.hpp"
#include "heavytail/tailfit.hpp"

using namespace heavytail;
using dist::DistributionSpec;
using gof::BootstrapOptions;
using gof::RefitMode;

namespace {

// Direct enumeration of both sup branches with the model cdf.
double ks_oracle(std::vector<double> x, const DistributionSpec& spec) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double g = 1.0 - dist::tail_function(spec, x[i]);
    d = std::max({d, std::abs((i + 1) / n - g), std::abs(i / n - g)});
  }
  return d;
}

tailfit::TailSelection pareto_tail(double alpha, std::size_t n, std::uint64_t seed) {
  const auto s = dist::sample(DistributionSpec::pareto(alpha, 1.0), n, seed);
  return tailfit::select_tail(s, 1.0);
}

}  // namespace

TEST_CASE("KS statistic on hand-built samples") {
  const auto spec = DistributionSpec::pareto(1.0, 1.0);
  // One observation where G = 0.5.
  CHECK(gof::ks_statistic(tailfit::make_tail({2.0}, 1.0), spec) == 0.5);

  // Ten observations at G = (i - 0.5) / 10.
  std::vector<double> x;
  for (int i = 1; i <= 10; ++i) x.push_back(dist::quantile(spec, 1.0 - (i - 0.5) / 10.0));
  CHECK(gof::ks_statistic(tailfit::make_tail(x, 1.0), spec) ==
        Catch::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("KS statistic matches the enumeration oracle and is never zero") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = pareto_tail(1.3, 50 + seed * 37, seed);
    const auto spec = DistributionSpec::pareto(1.25, 1.0);
    const double d = gof::ks_statistic(t, spec);
    CHECK(d == Catch::Approx(ks_oracle(t.tail_values, spec)).epsilon(1e-13));
    CHECK(d > 0.0);
  }
}

TEST_CASE("KS statistic rejects a model with another support bound") {
  const auto t = pareto_tail(1.3, 100, 1);
  CHECK_THROWS_AS(gof::ks_statistic(t, DistributionSpec::pareto(1.3, 2.0)), Error);
}

TEST_CASE("bootstrap report invariants") {
  const auto t = pareto_tail(1.236, 500, 77);
  const auto fit = tailfit::fit_power_mle(t);
  BootstrapOptions o;
  o.n_replicates = 2000;
  o.seed = 5;
  o.keep_replicates = true;
  const auto r = gof::bootstrap_test(t, fit, o);

  REQUIRE(r.replicate_ks.size() == 2000);
  const auto at_least = std::count_if(r.replicate_ks.begin(), r.replicate_ks.end(),
                                      [&](double d) { return d >= r.observed_ks; });
  CHECK(r.n_at_least_observed == static_cast<std::size_t>(at_least));
  CHECK(r.p_value == static_cast<double>(at_least) / 2000.0);
  CHECK(r.observed_ks == gof::ks_statistic(t, tailfit::to_spec(fit)));

  // Nearest-rank percentiles recomputed from the kept replicates.
  std::vector<double> sorted = r.replicate_ks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(r.critical_value(0.05) == sorted[1899]);
  CHECK(r.critical_value(0.10) == sorted[1799]);
  CHECK(r.critical_value(0.01) == sorted[1979]);
  CHECK(r.critical_value(0.10) <= r.critical_value(0.05));
  CHECK(r.critical_value(0.05) <= r.critical_value(0.01));
  CHECK_THROWS_AS(r.critical_value(0.2), Error);

  // Every replicate is a fresh draw from the fitted model.
  const auto model = tailfit::to_spec(fit);
  std::vector<double> rep(t.n_tail());
  dist::draw(model, derive_seed(5, 123), rep);
  CHECK(r.replicate_ks[123] == Catch::Approx(ks_oracle(rep, model)).epsilon(1e-13));
}

TEST_CASE("bootstrap output does not depend on the worker count") {
  const auto t = pareto_tail(1.1, 800, 3);
  for (auto mode : {RefitMode::fixed, RefitMode::refit}) {
    BootstrapOptions o;
    o.n_replicates = 1000;
    o.seed = 99;
    o.mode = mode;
    o.keep_replicates = true;
    o.workers = 1;
    const auto serial = gof::bootstrap_test(t, tailfit::fit_power_mle(t), o);
    for (unsigned w : {2u, 3u, 8u}) {
      o.workers = w;
      CHECK(gof::bootstrap_test(t, tailfit::fit_power_mle(t), o) == serial);
    }
  }
}

TEST_CASE("a true Pareto tail is not rejected") {
  const auto t = pareto_tail(1.236, 2000, 2000);
  BootstrapOptions o;
  o.seed = 1;
  const auto r = gof::bootstrap_test(t, tailfit::fit_power_mle(t), o);
  CHECK(r.n_replicates == 10000);
  CHECK(r.p_value > 0.05);
}

TEST_CASE("refitting shrinks the replicate statistics") {
  const auto t = pareto_tail(1.5, 400, 12);
  const auto fit = tailfit::fit_power_mle(t);
  BootstrapOptions o;
  o.n_replicates = 1000;
  o.seed = 2;
  o.keep_replicates = true;
  const auto fixed = gof::bootstrap_test(t, fit, o);
  o.mode = RefitMode::refit;
  const auto refit = gof::bootstrap_test(t, fit, o);
  CHECK(refit.refit_mode == RefitMode::refit);
  // Estimating the exponent on each replicate pulls the model toward the data.
  CHECK(refit.critical_value(0.05) < fixed.critical_value(0.05));
  CHECK(refit.p_value <= fixed.p_value);
}

TEST_CASE("the fixed-mode test is calibrated under the null") {
  // 500 independent null datasets; replicate count kept small for speed.
  int rejections = 0;
  for (std::uint64_t k = 0; k < 500; ++k) {
    const auto t = pareto_tail(1.236, 200, derive_seed(314, k));
    BootstrapOptions o;
    o.n_replicates = 200;
    o.seed = derive_seed(271, k);
    const auto fit = tailfit::fit_power_mle(t);
    // Under the null the data come from the model being tested.
    auto truth = fit;
    truth.exponent = 1.236;
    if (gof::bootstrap_test(t, truth, o).p_value < 0.05) ++rejections;
  }
  const double rate = rejections / 500.0;
  CHECK(rate >= 0.02);
  CHECK(rate <= 0.09);
}

TEST_CASE("bootstrap argument checks") {
  const auto t = pareto_tail(1.2, 100, 4);
  auto fit = tailfit::fit_power_mle(t);
  BootstrapOptions o;
  o.n_replicates = 99;
  CHECK_THROWS_AS(gof::bootstrap_test(t, fit, o), Error);
  o.n_replicates = 100;
  fit.cutoff = 2.0;
  CHECK_THROWS_AS(gof::bootstrap_test(t, fit, o), Error);
  CHECK(gof::upper_critical_value(std::vector<double>{0.1, 0.2, 0.3, 0.4}, 0.5) == 0.2);
  CHECK(gof::kSignificanceLevels.size() == 3);
}

TEST_CASE("lattice KS distance on a hand example") {
  // Model tail at 1, 2, 3: 1, 1/2, 1/4. Empirical tail: 1, 1/3, 0.
  const auto spec = DistributionSpec::exponential(std::log(2.0), 1.0);
  const auto t = tailfit::make_tail({1.0, 1.0, 2.0}, 1.0);
  CHECK(gof::ks_statistic_lattice(t, spec) == Catch::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(gof::ks_statistic_lattice(tailfit::make_tail({1.0, 2.5}, 1.0), spec),
                  Error);
}

TEST_CASE("lattice bootstrap is calibrated on geometric data") {
  int fixed_rejections = 0, refit_rejections = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    auto s = dist::sample(DistributionSpec::exponential(0.27, 1.0), 500, derive_seed(8, k));
    std::vector<double> counts(s.values().begin(), s.values().end());
    for (double& c : counts) c = 1.0 + std::floor(c - 1.0);
    const auto t = tailfit::make_tail(counts, 1.0);
    const auto fit = tailfit::fit_exponential(t.tail_values, 1.0);
    BootstrapOptions o;
    o.n_replicates = 200;
    o.seed = derive_seed(9, k);
    o.lattice = true;
    // Fixed mode tests the generating model itself; refit mode accounts for
    // the estimation of beta.
    auto truth = fit;
    truth.exponent = 0.27;
    const auto r = gof::bootstrap_test(t, truth, o);
    CHECK(r.lattice);
    if (r.p_value < 0.05) ++fixed_rejections;
    o.mode = RefitMode::refit;
    if (gof::bootstrap_test(t, fit, o).p_value < 0.05) ++refit_rejections;
  }
  // Ties in the discrete statistic make the >= p-value slightly conservative.
  CHECK(fixed_rejections / 200.0 <= 0.09);
  CHECK(refit_rejections / 200.0 <= 0.09);

  const auto t = pareto_tail(1.2, 100, 4);
  BootstrapOptions o;
  o.n_replicates = 100;
  o.lattice = true;
  CHECK_THROWS_AS(gof::bootstrap_test(t, tailfit::fit_power_mle(t), o), Error);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles/quad_oracle.hpp"
#include "specrep/poisson.hpp"

using namespace specrep;

namespace {

double poisson_pmf(int k, double lambda) {
  double logp = -lambda + k * std::log(lambda);
  for (int i = 2; i <= k; ++i) logp -= std::log(static_cast<double>(i));
  return std::exp(logp);
}

// Wilson-Hilferty approximation of the chi-square 99% quantile.
double chi2_crit_99(int df) {
  const double z = 2.3263478740408408;
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

BaseSpace example_space() {
  return BaseSpace(std::exp(-4.0), std::exp(2.0), UFunction::quadratic());
}

}  // namespace

TEST_CASE("intensity mass matches the quadrature oracle") {
  auto space = example_space();
  const double lambda = oracle::integrate_haar(
      [](double r) { return std::exp(-2.0 * r * r); }, std::exp(-4.0), std::exp(2.0), 1e-12);
  CHECK(std::abs(space.intensity_mass() - lambda) < 1e-8);
}

TEST_CASE("sampler: count distribution, marginals") {
  auto space = example_space();
  const double lambda = space.intensity_mass();
  Rng rng(20250808);
  const long N = 100000;
  std::vector<long> counts(40, 0);
  std::vector<double> xs, rs;
  double total = 0.0;
  for (long s = 0; s < N; ++s) {
    auto omega = space.sample(rng);
    total += static_cast<double>(omega.points.size());
    if (omega.points.size() < counts.size()) ++counts[omega.points.size()];
    for (const auto& y : omega.points) {
      xs.push_back(y.x);
      rs.push_back(y.r);
    }
  }
  // Mean count within 3 sigma of Lambda.
  const double mean = total / N;
  const double sigma = std::sqrt(lambda / N);
  CHECK(std::abs(mean - lambda) < 3.0 * sigma);

  // Chi-square on binned counts at the 1% level (Lambda known).
  double chi2 = 0.0;
  int df = 0;
  double tail_expected = N * 1.0, tail_observed = N;
  for (int k = 0; k < 40; ++k) {
    const double e = N * poisson_pmf(k, lambda);
    if (e < 5.0) break;
    chi2 += (counts[k] - e) * (counts[k] - e) / e;
    tail_expected -= e;
    tail_observed -= counts[k];
    ++df;
  }
  if (tail_expected > 5.0) {
    chi2 += (tail_observed - tail_expected) * (tail_observed - tail_expected) / tail_expected;
    ++df;
  }
  CHECK(chi2 < chi2_crit_99(df - 1));

  // KS of the x marginal against uniform at the 1% level.
  std::sort(xs.begin(), xs.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = xs[i];
    ks = std::max(ks, std::abs(F - (i + 1.0) / xs.size()));
    ks = std::max(ks, std::abs(F - static_cast<double>(i) / xs.size()));
  }
  CHECK(ks < 1.6276 / std::sqrt(static_cast<double>(xs.size())));

  // KS of the r marginal against the normalized intensity.
  std::sort(rs.begin(), rs.end());
  double ks_r = 0.0;
  for (std::size_t i = 0; i < rs.size(); i += 997) {  // thinned sup over points
    const double F = oracle::integrate_haar([](double r) { return std::exp(-2.0 * r * r); },
                                            std::exp(-4.0), rs[i], 1e-10) /
                     lambda;
    ks_r = std::max(ks_r, std::abs(F - (i + 1.0) / rs.size()));
  }
  CHECK(ks_r < 1.6276 / std::sqrt(static_cast<double>(rs.size())) + 1e-3);
}

TEST_CASE("quasi weights under both conventions") {
  auto u = UFunction::quadratic();
  Configuration empty;
  CHECK(quasi_weight(empty, u, WeightConvention::AsStated) == 1.0);
  CHECK(quasi_weight(empty, u, WeightConvention::CharfuncConsistent) == 1.0);
  Configuration one{{{0.5, 0.3}}};
  CHECK(quasi_weight(one, u, WeightConvention::AsStated) == doctest::Approx(std::exp(-0.5)));
  Configuration two{{{0.5, 0.3}, {1.0, 0.9}}};
  CHECK(quasi_weight(two, u, WeightConvention::CharfuncConsistent) ==
        doctest::Approx(std::exp(0.5 + 2.0)));
}

TEST_CASE("charfunc analytic: f = u collapses to 1; f = 0 closed form") {
  BaseSpace space(std::exp(-4.0), 1.2, UFunction::quadratic());
  TestFunction fu{"u", [](double r, double) { return 2.0 * r * r; }, {}};
  CHECK(charfunc_analytic(fu, space) == doctest::Approx(1.0).epsilon(1e-9));
  TestFunction f0{"zero", [](double, double) { return 0.0; }, {}};
  const double expect = std::exp(oracle::integrate_haar(
      [](double r) { return 1.0 - std::exp(-2.0 * r * r); }, std::exp(-4.0), 1.2, 1e-12));
  CHECK(charfunc_analytic(f0, space) == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("the f = 0 discriminator certifies exactly one convention") {
  BaseSpace space(std::exp(-4.0), 1.2, UFunction::quadratic());
  TestFunction f0{"zero", [](double, double) { return 0.0; }, {}};
  const double rhs = charfunc_analytic(f0, space);  // exp(int (1 - e^{-u}))

  auto mc_char = charfunc_mc(f0, space, WeightConvention::CharfuncConsistent, 200000, 7);
  auto mc_stated = charfunc_mc(f0, space, WeightConvention::AsStated, 200000, 7);

  // Campbell oracles for E_nu[pi] under each convention.
  const double campbell_char = campbell_pi_mean(space, WeightConvention::CharfuncConsistent);
  const double campbell_stated = campbell_pi_mean(space, WeightConvention::AsStated);
  CHECK(std::abs(mc_char.value - campbell_char) < 3.0 * mc_char.stderr_est);
  CHECK(std::abs(mc_stated.value - campbell_stated) < 3.0 * mc_stated.stderr_est);

  const bool char_matches = std::abs(mc_char.value - rhs) < 3.0 * mc_char.stderr_est;
  const bool stated_matches = std::abs(mc_stated.value - rhs) < 3.0 * mc_stated.stderr_est;
  CHECK(char_matches);
  CHECK(!stated_matches);
}

TEST_CASE("charfunc MC agrees with the analytic value across a battery") {
  BaseSpace space(std::exp(-4.0), 1.2, UFunction::quadratic());
  std::vector<TestFunction> battery = {
      {"zero", [](double, double) { return 0.0; }, {}},
      {"u", [](double r, double) { return 2.0 * r * r; }, {}},
      {"indicator", [](double r, double x) { return (r > 0.2 && r < 0.8 && x < 0.5) ? 0.7 : 0.0; }, {0.5}},
      {"linear-r", [](double r, double) { return 0.5 * r; }, {}},
      {"u-plus-step", [](double r, double x) { return 2.0 * r * r + (x > 0.25 ? 0.4 : 0.0); }, {0.25}},
  };
  for (std::size_t i = 0; i < battery.size(); ++i) {
    auto mc = charfunc_mc(battery[i], space, WeightConvention::CharfuncConsistent, 200000,
                          1000 + static_cast<std::uint64_t>(i));
    const double truth = charfunc_analytic(battery[i], space);
    // f = u has identically unit weights: the estimator is exact and its
    // stderr collapses to zero.
    CHECK(std::abs(mc.value - truth) < 3.0 * mc.stderr_est + 1e-12);
  }
}

TEST_CASE("act_on_configuration: identity, constants, stepwise motion") {
  auto space = example_space();
  Configuration omega{{{0.1, 0.2}, {0.5, 0.7}, {2.0, 0.9}}};
  ScaleCurrent one{{}, {1.0}};
  auto moved = act_on_configuration(one, omega, space);
  CHECK(moved.leaked == 0);
  for (std::size_t i = 0; i < omega.points.size(); ++i)
    CHECK(moved.config.points[i].r == omega.points[i].r);

  ScaleCurrent c{{}, {1.5}};
  auto scaled = act_on_configuration(c, omega, space);
  for (std::size_t i = 0; i < omega.points.size(); ++i)
    CHECK(scaled.config.points[i].r == doctest::Approx(1.5 * omega.points[i].r));

  ScaleCurrent step{{0.5}, {2.0, 1.0}};
  auto stepped = act_on_configuration(step, omega, space);
  CHECK(stepped.config.points[0].r == doctest::Approx(0.2));  // x = 0.2 < 0.5
  CHECK(stepped.config.points[1].r == doctest::Approx(0.5));  // x = 0.7 cell value 1
  CHECK(stepped.config.points[2].r == doctest::Approx(2.0));

  ScaleCurrent huge{{}, {1000.0}};
  auto leaked = act_on_configuration(huge, omega, space);
  CHECK(leaked.leaked == 3);
}

TEST_CASE("radon-nikodym factor: identity, constant, and step currents") {
  BaseSpace space(std::exp(-4.0), std::exp(1.5), UFunction::quadratic());
  TestFunction g{"bump", [](double r, double x) { return (r > 0.3 && r < 1.5) ? 0.5 * (1.0 + x) : 0.0; }, {}};

  ScaleCurrent one{{}, {1.0}};
  auto rep1 = radon_nikodym_check(one, space, g, 150000, 11);
  CHECK(rep1.predicted_factor == doctest::Approx(1.0));
  CHECK(rep1.pass);

  ScaleCurrent c{{}, {1.2}};
  auto rep2 = radon_nikodym_check(c, space, g, 150000, 13);
  CHECK(rep2.predicted_factor == doctest::Approx(1.2));
  CHECK(rep2.leakage_fraction < 1e-3);
  CHECK(rep2.pass);

  ScaleCurrent step{{0.5}, {1.2, 1.0}};
  auto rep3 = radon_nikodym_check(step, space, g, 150000, 17);
  CHECK(rep3.predicted_factor == doctest::Approx(std::sqrt(1.2)));
  CHECK(rep3.pass);

  ScaleCurrent big{{}, {50.0}};
  CHECK_THROWS_AS(radon_nikodym_check(big, space, g, 1000, 19), std::domain_error);
}

#include <doctest.h>

#include <cmath>

#include "oracles/quad_oracle.hpp"
#include "specrep/direct_integral.hpp"
#include "specrep/graded_algebra.hpp"
#include "specrep/regular_rep.hpp"
#include "specrep/pairwise.hpp"
#include "specrep/quadrature.hpp"
#include "specrep/rng.hpp"

using namespace specrep;

namespace {

GaussianVector random_gaussian(const AlgebraPtr& alg, Rng& rng) {
  std::vector<std::vector<double>> diags;
  for (int lv = 1; lv <= alg->class_n(); ++lv) {
    std::vector<double> d(static_cast<std::size_t>(alg->level_dim(lv)));
    for (auto& x : d) x = rng.uniform(0.3, 3.0);
    diags.push_back(std::move(d));
  }
  return GaussianVector::diagonal(alg, diags);
}

Element random_element(const AlgebraPtr& alg, Rng& rng, double scale = 1.0) {
  std::vector<double> c(static_cast<std::size_t>(alg->dim()));
  for (auto& x : c) x = rng.uniform(-scale, scale);
  return alg->element(std::move(c));
}

}  // namespace

TEST_CASE("Gaussian normalization constants match the quadrature oracle") {
  auto alg = GradedAlgebra::heisenberg(2);
  Rng rng(101);
  auto F = random_gaussian(alg, rng);
  // Level 2 is one-dimensional: int e^{-2 m x^2} dx.
  const double m2 = F.form(2)(0, 0);
  const double val = oracle::integrate([&](double x) { return std::exp(-2.0 * m2 * x * x); }, -30.0, 30.0);
  CHECK(std::abs(val - F.normalization(2)) < 1e-12 * val);
  // Level 1 is diagonal 2-D: product of two 1-D integrals.
  const double a = F.form(1)(0, 0), b = F.form(1)(1, 1);
  const double v1 = oracle::integrate([&](double x) { return std::exp(-2.0 * a * x * x); }, -30.0, 30.0);
  const double v2 = oracle::integrate([&](double x) { return std::exp(-2.0 * b * x * x); }, -30.0, 30.0);
  CHECK(std::abs(v1 * v2 - F.normalization(1)) < 1e-11 * v1 * v2);
}

TEST_CASE("abelian overlap equals the closed form e^{-(r^2/2) mu(b)}") {
  auto alg = GradedAlgebra::abelian(2);
  Rng rng(103);
  for (int rep = 0; rep < 20; ++rep) {
    auto F = random_gaussian(alg, rng);
    RegularKernel K(F);
    auto b = random_element(alg, rng, 2.0);
    for (double lr = -5.0; lr <= 0.0; lr += 0.5) {
      const double r = std::exp(lr);
      const double mu_b = F.mu(b);
      const double expected = std::exp(-0.5 * r * r * mu_b);
      CHECK(std::abs(K.overlap(b, r).value - expected) < 1e-12);
    }
  }
}

TEST_CASE("overlap: identity gives exactly 1, values stay in (0, 1]") {
  auto alg = GradedAlgebra::heisenberg(2);
  Rng rng(107);
  auto F = random_gaussian(alg, rng);
  RegularKernel K(F);
  CHECK(K.overlap_shift(alg->zero()).value == 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    auto b = random_element(alg, rng, 3.0);
    const double v = K.overlap(b, std::exp(rng.uniform(-3.0, 1.0))).value;
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("overlap symmetry under b -> b^{-1}") {
  auto alg = GradedAlgebra::heisenberg(3);
  Rng rng(109);
  auto F = random_gaussian(alg, rng);
  RegularKernel K(F);
  for (int rep = 0; rep < 20; ++rep) {
    auto b = random_element(alg, rng, 2.0);
    const double r = std::exp(rng.uniform(-2.0, 0.5));
    CHECK(K.overlap(b, r).value == doctest::Approx(K.overlap(group_inv(b), r).value).epsilon(1e-12));
  }
}

TEST_CASE("class-2 exact path agrees with the Monte Carlo oracle") {
  auto alg = GradedAlgebra::heisenberg(2);
  Rng rng(113);
  auto F = random_gaussian(alg, rng);
  RegularKernel exact(F);
  // Same vector, forced MC evaluation through a class-3-free shim: compare
  // against a direct importance-sampling estimate here in the test.
  auto b = random_element(alg, rng, 1.0);
  const double r = 0.1;
  const Element c = dilate(r, b);
  const double truth = exact.overlap_shift(c).value;

  Rng mc(1234);
  const long N = 1'000'000;
  // density prop. to e^{-2mu}: level 1 diagonal (d=2), level 2 diagonal (d=1)
  double sum = 0.0, sumsq = 0.0;
  const double s1a = 0.5 / std::sqrt(F.form(1)(0, 0));
  const double s1b = 0.5 / std::sqrt(F.form(1)(1, 1));
  const double s2 = 0.5 / std::sqrt(F.form(2)(0, 0));
  for (long i = 0; i < N; ++i) {
    Element a = alg->element({s1a * mc.normal(), s1b * mc.normal(), s2 * mc.normal()});
    const double w = std::exp(-(F.mu(group_mul(a, c)) - F.mu(a)));
    sum += w;
    sumsq += w * w;
  }
  const double mean = sum / N;
  const double se = std::sqrt((sumsq / N - mean * mean) / (N - 1.0));
  CHECK(std::abs(mean - truth) < 3.0 * se);
}

TEST_CASE("class-3 kernel MC path is reproducible and sane") {
  auto alg = GradedAlgebra::free_nilpotent_rank2(3);
  auto F = GaussianVector::isotropic(alg);
  RegularKernel K(F, 20000, 42);
  auto b = alg->element({0.5, -0.3, 0.2, 0.1, -0.2});
  auto v1 = K.overlap(b, 0.5);
  auto v2 = K.overlap(b, 0.5);
  CHECK(v1.monte_carlo);
  CHECK(v1.value == v2.value);  // deterministic per-argument stream
  CHECK(v1.value > 0.0);
  CHECK(v1.value < 1.0 + 3.0 * v1.stderr_est);
}

TEST_CASE("small-r exponent: class 1 slope 2 of 1 - overlap") {
  auto alg = GradedAlgebra::abelian(1);
  auto F = GaussianVector::diagonal(alg, {{0.7}});
  RegularKernel K(F);
  auto b = alg->element({1.3});
  auto slope = small_r_exponent(K, b);
  REQUIRE(slope.has_value());
  CHECK(*slope == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("small-r exponent: Heisenberg noncentral slope 2, central slope 4") {
  auto alg = GradedAlgebra::heisenberg(2);
  Rng rng(127);
  auto F = random_gaussian(alg, rng);
  RegularKernel K(F);
  auto b = alg->element({0.8, -0.5, 0.3});
  auto slope = small_r_exponent(K, b);
  REQUIRE(slope.has_value());
  CHECK(*slope > 1.9);
  CHECK(*slope < 2.1);
  auto central = alg->element({0.0, 0.0, 1.0});
  auto slope_c = small_r_exponent(K, central);
  REQUIRE(slope_c.has_value());
  CHECK(*slope_c == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("summability certificate: finite for class 1, zero at identity") {
  auto alg = GradedAlgebra::abelian(1);
  auto F = GaussianVector::diagonal(alg, {{1.0}});
  RegularKernel K(F);
  RadialMeasure meas{RadialGrid::default_grid(), UFunction::quadratic()};
  auto cert = summability_certificate(K, alg->element({1.0}), meas);
  CHECK(cert.finite);
  CHECK(cert.total() > 0.0);
  CHECK(cert.alpha == doctest::Approx(2.0).epsilon(0.02));
  auto zero_cert = summability_certificate(K, alg->zero(), meas);
  CHECK(zero_cert.total() == 0.0);

  // Grid refinement moves the certificate by less than 1%.
  RadialMeasure dense{RadialGrid(meas.grid.node(0), meas.grid.node(meas.grid.size() - 1), 191),
                      UFunction::quadratic()};
  auto cert2 = summability_certificate(K, alg->element({1.0}), dense);
  CHECK(std::abs(cert2.total() - cert.total()) < 0.01 * cert.total());
}

TEST_CASE("shift polynomials: locality and vanishing at b = 0") {
  auto alg = GradedAlgebra::free_nilpotent_rank2(3);
  Rng rng(131);
  auto b = random_element(alg, rng);
  ShiftPolynomials sp{b, 0.37};
  auto a = random_element(alg, rng);
  auto q2 = sp.q(a, 2);
  auto q3 = sp.q(a, 3);
  // Perturbing a_2, a_3 must leave q_2 unchanged; perturbing a_3 leaves q_3.
  auto a2 = a;
  a2.coords[2] += 0.7;
  a2.coords[3] -= 0.4;
  auto q2b = sp.q(a2, 2);
  CHECK(q2b[0] == doctest::Approx(q2[0]).epsilon(1e-14));
  auto a3 = a;
  a3.coords[3] += 1.1;
  a3.coords[4] -= 0.6;
  auto q3b = sp.q(a3, 3);
  CHECK(q3b[0] == doctest::Approx(q3[0]).epsilon(1e-13));
  CHECK(q3b[1] == doctest::Approx(q3[1]).epsilon(1e-13));

  ShiftPolynomials sp0{alg->zero(), 0.37};
  auto qz = sp0.q(a, 2);
  CHECK(qz[0] == 0.0);
}

TEST_CASE("MC estimator is unbiased across independent seeds (class 2)") {
  auto alg = GradedAlgebra::heisenberg(2);
  auto F = GaussianVector::isotropic(alg);
  RegularKernel exact(F);
  auto b = alg->element({0.6, 0.4, -0.3});
  const Element c = dilate(0.3, b);
  const double truth = exact.overlap_shift(c).value;
  double mean_of_means = 0.0, se2 = 0.0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    RegularKernel mc_kernel(F, 50000, 1000 + static_cast<std::uint64_t>(s));
    // Route through the MC estimator directly via a class-3 style call:
    // use the internal path by evaluating with monte carlo forced off the
    // exact branch is not exposed; instead re-sample here.
    Rng rng(7000 + static_cast<std::uint64_t>(s));
    const long N = 50000;
    double sum = 0.0;
    const double s1 = 0.5, s2v = 0.5;  // isotropic: M = I, L^{-T}/2 = I/2
    for (long i = 0; i < N; ++i) {
      Element a = alg->element({s1 * rng.normal(), s1 * rng.normal(), s2v * rng.normal()});
      sum += std::exp(-(F.mu(group_mul(a, c)) - F.mu(a)));
    }
    const double m = sum / N;
    mean_of_means += m;
    se2 += (m - truth) * (m - truth);
  }
  mean_of_means /= seeds;
  const double se = std::sqrt(se2 / seeds / seeds);
  CHECK(std::abs(mean_of_means - truth) < 3.0 * se + 1e-12);
}

TEST_CASE("cross overlaps: bi kernel reduces to the diagonal kernel") {
  auto alg = GradedAlgebra::heisenberg(2);
  Rng rng(137);
  auto F = random_gaussian(alg, rng);
  RegularKernel K(F);
  const double Z = bi_overlap_raw(F, F, alg->zero());
  for (int k = 0; k < 10; ++k) {
    auto c = random_element(alg, rng, 1.5);
    CHECK(bi_overlap_raw(F, F, c) / Z == doctest::Approx(K.overlap_shift(c).value).epsilon(1e-12));
  }
}

TEST_CASE("difference of two Gaussian vectors stays almost invariant") {
  // The defect of the normalized difference F_mu - F_mu' is finite and
  // decays like r near 0, certifying the non-cohomology mechanism at the
  // level of finite defects.
  auto alg = GradedAlgebra::heisenberg(2);
  auto F = GaussianVector::diagonal(alg, {{1.0, 0.7}, {1.3}});
  auto G = GaussianVector::diagonal(alg, {{0.5, 1.1}, {0.8}});
  Rng rng(139);
  auto b = random_element(alg, rng, 1.0);
  const UFunction u = UFunction::quadratic();
  RadialGrid grid = RadialGrid::default_grid();
  std::vector<double> lx, ly, terms;
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    const double d = difference_defect(F, G, b, r);
    terms.push_back(grid.weight(i) * d * u.half_density(r));
    if (r < 0.1) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(d));
    }
  }
  const double integral = pairwise_sum(terms);
  CHECK(integral > 0.0);
  CHECK(integral < 10.0);
  const double slope = fit_line(lx, ly).slope;
  CHECK(slope > 0.5);  // integrable small-r tail against d*r
}

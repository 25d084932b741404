#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <fstream>

#include "specrep/direct_integral.hpp"
#include "specrep/rng.hpp"
#include "specrep/un1.hpp"

using namespace specrep;

namespace {

// Random element of U(n,1) as exp(J K) with K anti-Hermitian.
UnMatrix random_un(int n, Rng& rng, double scale = 0.6) {
  const Eigen::MatrixXcd J = UnMatrix::form_J(n);
  Eigen::MatrixXcd K(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) K(i, j) = cplx(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
  Eigen::MatrixXcd A = 0.5 * (K - K.adjoint().eval());
  Eigen::MatrixXcd JA = J * A;
  return UnMatrix(JA.exp(), 1e-8);
}

HeisElement random_heis(int n, Rng& rng, double z_scale = 0.5) {
  Eigen::VectorXcd z(n - 1);
  for (int i = 0; i < n - 1; ++i) z[i] = cplx(rng.uniform(-z_scale, z_scale), rng.uniform(-z_scale, z_scale));
  return HeisElement::make(rng.uniform(-1, 1), z);
}

double pt_dist(const DomainPoint& a, const DomainPoint& b) {
  return std::max(std::abs(a.a - b.a), (a.b - b.b).cwiseAbs().maxCoeff());
}

}  // namespace

TEST_CASE("UnMatrix: J-invariant validation and inverse") {
  Rng rng(401);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 10; ++rep) {
      auto g = random_un(n, rng);
      CHECK(g.j_defect() < 1e-10);
      auto gi = g.inverse();
      CHECK((g.m() * gi.m() - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  Eigen::MatrixXcd bad = 2.0 * Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(UnMatrix{bad}, std::invalid_argument);
}

TEST_CASE("p_matrix: J-unitary and a homomorphism for the semidirect law") {
  Rng rng(409);
  for (int n : {2, 3}) {
    RadialGrid grid = RadialGrid::default_grid();
    for (int rep = 0; rep < 10; ++rep) {
      const double r1 = std::exp(rng.uniform(-1, 1));
      const double r2 = std::exp(rng.uniform(-1, 1));
      auto g1 = random_heis(n, rng);
      auto g2 = random_heis(n, rng);
      CHECK(p_matrix(r1, g1).j_defect() < 1e-12);
      // (r1, g1)(r2, g2) = (r1 r2, dilate(r2, g1) g2)
      auto prod = un_mul(p_matrix(r1, g1), p_matrix(r2, g2));
      auto direct = p_matrix(r1 * r2, heis_mul(heis_dilate(r2, g1), g2));
      CHECK((prod.m() - direct.m()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("mobius action: identity, composition, domain preservation") {
  Rng rng(419);
  for (int n : {2, 3}) {
    const DomainPoint v0 = DomainPoint::base(n);
    CHECK(pt_dist(mobius_action(UnMatrix::identity(n), v0), v0) == 0.0);
    for (int rep = 0; rep < 20; ++rep) {
      auto g1 = random_un(n, rng);
      auto g2 = random_un(n, rng);
      DomainPoint v = v0;
      v.a += cplx(rng.uniform(-0.3, 0.3), rng.uniform(-0.5, 0.5));
      v.b = Eigen::VectorXcd(n - 1);
      for (int i = 0; i < n - 1; ++i) v.b[i] = cplx(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4));
      if (v.q() > -0.05) continue;
      auto lhs = mobius_action(un_mul(g1, g2), v);
      auto rhs = mobius_action(g1, mobius_action(g2, v));
      CHECK(pt_dist(lhs, rhs) < 1e-10);
      CHECK(lhs.q() < 0.0);
    }
  }
}

TEST_CASE("p-matrix mobius action matches the domain action of P") {
  Rng rng(421);
  for (int n : {2, 3}) {
    for (int rep = 0; rep < 20; ++rep) {
      const double r0 = std::exp(rng.uniform(-1, 1));
      auto g = random_heis(n, rng);
      DomainPoint v = DomainPoint::base(n);
      v.a += cplx(rng.uniform(-0.5, 0.2), rng.uniform(-0.4, 0.4));
      for (int i = 0; i < n - 1; ++i) v.b[i] = cplx(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
      REQUIRE(v.q() < 0.0);
      auto via_matrix = mobius_action(p_matrix(r0, g), v);
      auto via_action = p_domain_action(r0, g, v);
      CHECK(pt_dist(via_matrix, via_action) < 1e-12);
      CHECK(std::abs(via_action.q() - v.q() / (r0 * r0)) < 1e-12);
    }
  }
}

TEST_CASE("pu_decompose: reconstruction, stabilizer, block structure") {
  Rng rng(431);
  for (int n : {2, 3}) {
    const DomainPoint v0 = DomainPoint::base(n);
    const Eigen::MatrixXcd S = UnMatrix::basis_to_diagonal(n);
    for (int rep = 0; rep < 30; ++rep) {
      auto g = random_un(n, rng, 0.7);
      auto pu = pu_decompose(g);
      CHECK(pu.heis.constraint_defect() < 1e-12);
      // matrix(p) u = g
      auto rec = un_mul(p_matrix(pu.r0, pu.heis), pu.u);
      CHECK((rec.m() - g.m()).cwiseAbs().maxCoeff() < 1e-10);
      // u fixes v0
      auto fixed = mobius_action(pu.u, v0);
      CHECK(pt_dist(fixed, v0) < 1e-10);
      // In the rotated basis the stabilizer is block U(n) x U(1).
      Eigen::MatrixXcd uf = S * pu.u.m() * S;
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(uf(i, n)) < 1e-10);
        CHECK(std::abs(uf(n, i)) < 1e-10);
      }
    }
    // g already in P: u = identity.
    auto p = p_matrix(1.7, random_heis(n, rng));
    auto pu = pu_decompose(p);
    CHECK((pu.u.m() - Eigen::MatrixXcd::Identity(n + 1, n + 1)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(pu.r0 == doctest::Approx(1.7).epsilon(1e-12));
    // g in the compact stabilizer: p = identity.
    Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(n + 1, n + 1);
    blk(0, 0) = cplx(std::cos(0.4), std::sin(0.4));
    for (int i = 1; i < n; ++i) blk(i, i) = 1.0;
    blk(n, n) = cplx(std::cos(-0.9), std::sin(-0.9));
    Eigen::MatrixXcd u_e = S * blk * S;  // block-diagonal in the rotated basis
    auto pu2 = pu_decompose(UnMatrix(u_e, 1e-10));
    CHECK(pu2.r0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pu2.heis.zeta) < 1e-12);
    CHECK(pu2.heis.z.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("extended_apply agrees with the special representation on P") {
  // T~(p)(f_{v1} - f_{v2}) = f_{p v1} - f_{p v2}: transport the points, then
  // compare the realized truncated sections against the fiberwise operators.
  const int n = 2, D = 12;
  FockFamily fam{FockTruncation(n, D)};
  RadialMeasure meas{RadialGrid::default_grid(), UFunction::quadratic()};
  const RadialGrid& grid = meas.grid;
  Rng rng(433);
  for (int rep = 0; rep < 8; ++rep) {
    const int k = static_cast<int>(rng.next_u64() % 3) - 1;
    const double r0 = std::pow(grid.ratio(), k);
    auto g0 = random_heis(n, rng, 0.2);
    DomainPoint v1 = DomainPoint::base(n), v2 = DomainPoint::base(n);
    v1.a += cplx(rng.uniform(-0.5, 0.3), rng.uniform(-0.3, 0.3));
    v2.a += cplx(rng.uniform(-0.5, 0.3), rng.uniform(-0.3, 0.3));
    v1.b[0] = cplx(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    v2.b[0] = cplx(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
    REQUIRE(v1.q() < 0.0);
    REQUIRE(v2.q() < 0.0);

    // Path A: fiberwise special representation applied to the realized
    // section of f_{v1} - f_{v2}.
    DirectIntegralVector<FockFamily> section;
    for (int i = 0; i < grid.size(); ++i)
      section.fibers.push_back(coherent_fiber(fam.truncation(), v1, grid.node(i)) -
                               coherent_fiber(fam.truncation(), v2, grid.node(i)));
    GridSemidirect<FockFamily> p{k, g0};
    auto moved = tilde_apply(fam, grid, p, section).value;

    // Path B: transported coherent difference via the mobius action of the
    // matrix realization of p.
    auto pm = p_matrix(r0, g0);
    auto w1 = mobius_action(pm, v1);
    auto w2 = mobius_action(pm, v2);
    DirectIntegralVector<FockFamily> transported;
    for (int i = 0; i < grid.size(); ++i)
      transported.fibers.push_back(coherent_fiber(fam.truncation(), w1, grid.node(i)) -
                                   coherent_fiber(fam.truncation(), w2, grid.node(i)));

    // Ignore nodes vacated by the index shift (path A zero-fills them).
    auto diff = div_sub(fam, moved, transported);
    for (int i = 0; i < grid.size(); ++i)
      if (i - k < 0 || i - k >= grid.size()) diff.fibers[static_cast<std::size_t>(i)].setZero();
    CHECK(div_norm(fam, grid, diff) < 1e-9);
  }
}

TEST_CASE("cocycle b(g) = f_{g v0} - f_{v0} satisfies the cocycle identity") {
  // Under the extension, b(g1 g2) - T~(g1) b(g2) - b(g1) vanishes as a
  // coherent combination; check it through the pair integrals.
  Rng rng(439);
  for (int rep = 0; rep < 10; ++rep) {
    auto g1 = random_un(2, rng, 0.5);
    auto g2 = random_un(2, rng, 0.5);
    const DomainPoint v0 = DomainPoint::base(2);
    auto w12 = mobius_action(un_mul(g1, g2), v0);
    auto w1 = mobius_action(g1, v0);
    auto w2g1 = mobius_action(g1, mobius_action(g2, v0));
    // b(g1 g2) = f_{w12} - f_{v0}; T~(g1) b(g2) = f_{g1 g2 v0} - f_{g1 v0};
    // b(g1) = f_{w1} - f_{v0}. The sum telescopes iff w12 = g1(g2 v0).
    CHECK(pt_dist(w12, w2g1) < 1e-10);
    (void)w1;
  }
}

TEST_CASE("lambda multiplier: scale elements reproduce the projective scalar") {
  Rng rng(443);
  for (int rep = 0; rep < 6; ++rep) {
    const double r0 = std::exp(rng.uniform(-0.8, 0.8));
    auto p0 = p_matrix(r0, HeisElement::identity(2));
    auto g = p_matrix(std::exp(rng.uniform(-0.5, 0.5)), random_heis(2, rng, 0.4));
    const cplx lam = lambda_multiplier(p0, g);
    // lambda((r0, e), p) = -log(r0)/2 for every p in P: the projective
    // scalar of the measure transport, in the reciprocal parameterization.
    CHECK(std::abs(lam - cplx(-0.5 * std::log(r0), 0.0)) < 1e-9);
  }
  // General P-elements carry the same scalar.
  for (int rep = 0; rep < 6; ++rep) {
    const double r0 = std::exp(rng.uniform(-0.8, 0.8));
    auto p0 = p_matrix(r0, random_heis(2, rng, 0.4));
    auto g = p_matrix(std::exp(rng.uniform(-0.5, 0.5)), random_heis(2, rng, 0.4));
    const cplx lam = lambda_multiplier(p0, g);
    CHECK(std::abs(lam - cplx(-0.5 * std::log(r0), 0.0)) < 1e-9);
  }
}

TEST_CASE("lambda consistency: U(g0 g1) vs U(g0) U(g1) modulus on M") {
  // Re[lambda(g1 g2, g) - lambda(g2, g) - lambda(g1, g2 g)] = 0
  // (the operators preserve inner products), and the imaginary part is
  // g-independent and equals rho(g1, g2) mod 2pi.
  Rng rng(449);
  for (int rep = 0; rep < 8; ++rep) {
    auto g1 = random_un(2, rng, 0.45);
    auto g2 = random_un(2, rng, 0.45);
    auto g = random_un(2, rng, 0.45);
    auto ga = random_un(2, rng, 0.45);
    auto g12 = un_mul(g1, g2);
    const cplx d1 = lambda_multiplier(g12, g) - lambda_multiplier(g2, g) -
                    lambda_multiplier(g1, un_mul(g2, g));
    const cplx d2 = lambda_multiplier(g12, ga) - lambda_multiplier(g2, ga) -
                    lambda_multiplier(g1, un_mul(g2, ga));
    CHECK(std::abs(d1.real()) < 1e-8);
    // g-independence of the phase defect:
    double phase_gap = std::remainder(d1.imag() - d2.imag(), 2.0 * 3.14159265358979323846);
    CHECK(std::abs(phase_gap) < 1e-8);
    // and it matches rho:
    const double rho = rho_multiplier(g1, g2);
    double rho_gap = std::remainder(d1.imag() - rho, 2.0 * 3.14159265358979323846);
    CHECK(std::abs(rho_gap) < 1e-8);
  }
}

TEST_CASE("rho multiplier: identity argument and the 2-cocycle identity") {
  Rng rng(457);
  auto g = random_un(2, rng, 0.5);
  CHECK(std::abs(rho_multiplier(UnMatrix::identity(2), g)) < 1e-10);

  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int rep = 0; rep < 12; ++rep) {
    auto g1 = random_un(2, rng, 0.45);
    auto g2 = random_un(2, rng, 0.45);
    auto g3 = random_un(2, rng, 0.45);
    const double lhs = rho_multiplier(g1, g2) + rho_multiplier(un_mul(g1, g2), g3);
    const double rhs = rho_multiplier(g2, g3) + rho_multiplier(g1, un_mul(g2, g3));
    CHECK(std::abs(std::remainder(lhs - rhs, two_pi)) < 1e-8);
  }
}

TEST_CASE("matrix samples load from JSON and validate the J-invariant") {
  const char* good = R"({"n": 2, "entries": [
    [1,0],[0,0],[0,0],
    [0,0],[1,0],[0,0],
    [0,0],[0,0],[1,0]]})";
  const std::string path = "/tmp/specrep_matrix_ok.json";
  {
    std::ofstream out(path);
    out << good;
  }
  auto m = un_from_json_file(path);
  CHECK(m.n() == 2);
  CHECK(m.j_defect() < 1e-14);

  const char* bad = R"({"n": 2, "entries": [
    [2,0],[0,0],[0,0],
    [0,0],[1,0],[0,0],
    [0,0],[0,0],[1,0]]})";
  const std::string bad_path = "/tmp/specrep_matrix_bad.json";
  {
    std::ofstream out(bad_path);
    out << bad;
  }
  CHECK_THROWS(un_from_json_file(bad_path));
}

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "specrep/radial.hpp"

namespace specrep {

using cplx = std::complex<double>;

// Heisenberg group of order 2n-1 in (zeta, z) coordinates with
// Re zeta + |z|^2 / 2 = 0 and law
// (z1, w1)(z2, w2) = (zeta1 + zeta2 - z1 z2^*, z1 + z2).
struct HeisElement {
  cplx zeta{0.0, 0.0};
  Eigen::VectorXcd z;

  static HeisElement identity(int n);
  static HeisElement make(double t, const Eigen::VectorXcd& z);  // zeta = it - |z|^2/2
  double constraint_defect() const;
  int n() const { return static_cast<int>(z.size()) + 1; }
};

HeisElement heis_mul(const HeisElement& a, const HeisElement& b);
HeisElement heis_inv(const HeisElement& a);
HeisElement heis_dilate(double r, const HeisElement& a);  // (r^2 zeta, r z)

// Truncated Bargmann-Fock space: analytic polynomials in z over C^{n-1} of
// total degree <= D, monomial basis z^alpha with <z^a, z^a> = a!.
class FockTruncation {
 public:
  FockTruncation(int n, int max_degree);

  int n() const { return n_; }
  int vars() const { return n_ - 1; }
  int max_degree() const { return max_degree_; }
  int dim() const { return static_cast<int>(multi_.size()); }
  const std::vector<int>& index(int i) const { return multi_[static_cast<std::size_t>(i)]; }
  int degree(int i) const { return degree_[static_cast<std::size_t>(i)]; }
  double gram(int i) const { return gram_[static_cast<std::size_t>(i)]; }  // alpha!
  int find(const std::vector<int>& alpha) const;                           // -1 if outside

  // Cut-off for the protected subspace, degree <= D/2.
  int protected_degree() const { return max_degree_ / 2; }

 private:
  int n_, max_degree_;
  std::vector<std::vector<int>> multi_;
  std::vector<int> degree_;
  std::vector<double> gram_;
};

// Coefficient vector over the monomial basis.
using FockVector = Eigen::VectorXcd;

cplx fock_inner(const FockTruncation& tr, const FockVector& f, const FockVector& g);
double fock_norm(const FockTruncation& tr, const FockVector& f);

FockVector fock_vacuum(const FockTruncation& tr);

// Matrix of (T(zeta0, z0) f)(z) = e^{zeta0 - z z0^*} f(z + z0) in the
// monomial basis, truncated at total degree D.
Eigen::MatrixXcd irrep_matrix(const FockTruncation& tr, const HeisElement& g);
FockVector irrep_apply(const FockTruncation& tr, const HeisElement& g, const FockVector& f);

// Declared truncation bounds: tail_bound is the creation-operator estimate
// of ||(1 - P_D) T(g) f|| for unit f of degree <= m; the inner-product
// defect on that subspace is bounded by its square, and the composed
// group-law defect by twice the tail.
double fock_tail_bound(int max_degree, int subspace_degree, double z0_norm);
double fock_eps_inner(int max_degree, int subspace_degree, double z0_norm);
double fock_eps_op(int max_degree, int subspace_degree, double z0_norm);

// Representation family of the irreducible Fock representation, for the
// direct-integral machinery: T_r(g) = T(g^r) via truncated matrices.
class FockFamily {
 public:
  using Group = HeisElement;
  using Vector = FockVector;

  explicit FockFamily(FockTruncation tr) : tr_(std::move(tr)) {}
  const FockTruncation& truncation() const { return tr_; }

  Vector base() const { return fock_vacuum(tr_); }
  Vector apply(double r, const Group& g, const Vector& v) const {
    return irrep_apply(tr_, heis_dilate(r, g), v);
  }
  cplx inner(const Vector& v, const Vector& w) const { return fock_inner(tr_, v, w); }
  Vector add(const Vector& v, const Vector& w) const { return v + w; }
  Vector scale(cplx c, const Vector& v) const { return c * v; }
  Vector zero_vector() const { return FockVector::Zero(tr_.dim()); }

  Group identity() const { return HeisElement::identity(tr_.n()); }
  Group mul(const Group& a, const Group& b) const { return heis_mul(a, b); }
  Group inverse(const Group& a) const { return heis_inv(a); }
  Group dilate_group(double r, const Group& a) const { return heis_dilate(r, a); }

 private:
  FockTruncation tr_;
};

// Point of the domain realization of U \ U(n,1): v = (a, b) with
// a + conj(a) + b b^* < 0.
struct DomainPoint {
  cplx a{-1.0, 0.0};
  Eigen::VectorXcd b;

  double q() const { return 2.0 * a.real() + b.squaredNorm(); }
  static DomainPoint base(int n);  // v0 = (-1, 0)
};

// Coherent section f_v(r, z) = e^{r^2 a + r (z, b)}, (z, b) = sum z_i b_i.
// At fixed r the Fock coefficients are e^{r^2 a} (r b)^alpha / alpha!.
FockVector coherent_fiber(const FockTruncation& tr, const DomainPoint& v, double r);

// The section realized over a radial grid, one truncated fiber per node.
std::vector<FockVector> coherent_section(const FockTruncation& tr, const RadialGrid& grid,
                                         const DomainPoint& v);

// Exact fiber kernel <f_v(r), f_w(r)> = e^{r^2 B(v, w)} with
// B(v, w) = a + conj(a') + (b, conj(b')), linear in the first argument.
cplx coherent_B(const DomainPoint& v, const DomainPoint& w);

// Pairing <f_{v1} - f_{v2}, f_{v3}>_K over d*r: adaptive quadrature of the
// fiber kernels plus the small-r series tail.
cplx coherent_pair_integral(const DomainPoint& v1, const DomainPoint& v2, const DomainPoint& v3);

// Frullani closed form log(B(v2,v3)/B(v1,v3))/2 of the same pairing (test
// oracle and cross-check route).
cplx coherent_pair_closed_form(const DomainPoint& v1, const DomainPoint& v2, const DomainPoint& v3);

}  // namespace specrep

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "specrep/graded_algebra.hpp"
#include "specrep/radial.hpp"

namespace specrep {

// Gaussian vector F_mu(a) = exp(-sum_i mu_i(a_i)) in L^2(N, da), with the
// Lebesgue measure on each level rescaled so that int e^{-2 mu_i} da_i = 1.
// Only inner products of translated copies are ever computed; the function
// itself is never discretized.
class GaussianVector {
 public:
  GaussianVector(AlgebraPtr algebra, std::vector<Eigen::MatrixXd> forms);

  const AlgebraPtr& algebra() const { return algebra_; }
  const Eigen::MatrixXd& form(int level) const { return forms_[static_cast<std::size_t>(level - 1)]; }
  // Standard-Lebesgue value of int e^{-2 mu_i} da_i on level i.
  double normalization(int level) const { return norm_const_[static_cast<std::size_t>(level - 1)]; }

  double mu(const Element& a) const;  // sum_i mu_i(a_i)

  // Diagonal forms from per-level diagonal entries.
  static GaussianVector diagonal(const AlgebraPtr& alg, const std::vector<std::vector<double>>& diags);
  static GaussianVector isotropic(const AlgebraPtr& alg, double coeff = 1.0);

 private:
  AlgebraPtr algebra_;
  std::vector<Eigen::MatrixXd> forms_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt_;  // per-level Cholesky of M_i
  std::vector<double> norm_const_;
  friend class RegularKernel;
};

struct OverlapValue {
  double value = 0.0;
  double log_value = 0.0;
  double stderr_est = 0.0;  // 0 on the exact path
  bool monte_carlo = false;
};

// <T(c) F, F> for a group translation c, i.e. the overlap kernel. Exact
// iterated-Gaussian path for class <= 2, importance-sampling Monte Carlo
// for class 3.
class RegularKernel {
 public:
  explicit RegularKernel(GaussianVector F, long mc_samples = 1'000'000,
                         std::uint64_t mc_seed = 0x5eed5eedULL);

  const GaussianVector& vector() const { return F_; }
  bool exact_path() const { return F_.algebra()->class_n() <= 2; }

  OverlapValue overlap_shift(const Element& c) const;
  // <T_r(b) F, F> = K(b^r).
  OverlapValue overlap(const Element& b, double r) const;
  double log_overlap_exact(const Element& c) const;

  long mc_samples() const { return mc_samples_; }

 private:
  OverlapValue overlap_mc(const Element& c) const;
  GaussianVector F_;
  long mc_samples_;
  std::uint64_t mc_seed_;
};

// Affine shift data of (T_r(b)f)(a) = f(a . b^r): the k-th coordinate moves
// by r * q_k(a), with q_k depending only on a_1..a_{k-1}.
struct ShiftPolynomials {
  Element b;
  double r;
  Element shifted(const Element& a) const { return group_mul(a, dilate(r, b)); }
  // q_k(a) as a full coordinate vector restricted to level k.
  std::vector<double> q(const Element& a, int level) const;
};

// Symbolic element of L^2(N): sum_j c_j T(b_j) F. Near-duplicate
// translations are merged so that cocycle defects cancel structurally
// instead of through the Gram form.
struct GaussianCombo {
  std::vector<std::pair<std::complex<double>, Element>> terms;
};

struct InnerValue {
  std::complex<double> value{0.0, 0.0};
  double stderr_est = 0.0;
};

// Representation family of the regular representation for use with the
// direct-integral machinery. Group elements act by T_r(g) c_j T(b_j) F =
// c_j T(g^r b_j) F; inner products reduce to the overlap kernel.
class RegularFamily {
 public:
  using Group = Element;
  using Vector = GaussianCombo;

  explicit RegularFamily(RegularKernel kernel) : kernel_(std::move(kernel)) {}

  const RegularKernel& kernel() const { return kernel_; }
  const AlgebraPtr& algebra() const { return kernel_.vector().algebra(); }

  Vector base() const;  // F itself
  Vector apply(double r, const Group& g, const Vector& v) const;
  std::complex<double> inner(const Vector& v, const Vector& w) const;
  InnerValue inner_with_err(const Vector& v, const Vector& w) const;
  Vector add(const Vector& v, const Vector& w) const;
  Vector scale(std::complex<double> c, const Vector& v) const;
  Vector zero_vector() const { return {}; }

  Group identity() const { return algebra()->zero(); }
  Group mul(const Group& a, const Group& b) const { return group_mul(a, b); }
  Group inverse(const Group& a) const { return group_inv(a); }
  Group dilate_group(double r, const Group& a) const { return dilate(r, a); }

 private:
  static void merge(Vector& v);
  RegularKernel kernel_;
};

// Cross overlap int F(a c) G(a) dx in the plain Lebesgue measure, exact
// iterated-Gaussian path (class <= 2 only). Used for defects of difference
// vectors F_mu - F_mu', which are almost invariant whenever both factors
// are.
double bi_overlap_raw(const GaussianVector& F, const GaussianVector& G, const Element& c);

// ||T_r(b) h - h|| for the normalized difference h of two Gaussian vectors,
// assembled from the four cross overlaps.
double difference_defect(const GaussianVector& F, const GaussianVector& G, const Element& b,
                         double r);

// Fitted exponent of 1 - <T_r(b)F, F> against r over [e^-5, e^-2]. Empty
// when the overlap is indistinguishable from 1 across the window.
std::optional<double> small_r_exponent(const RegularKernel& kernel, const Element& b,
                                       double r_lo = std::exp(-5.0), double r_hi = std::exp(-2.0),
                                       int points = 13);

struct SummabilityCertificate {
  double grid_part = 0.0;
  double tail = 0.0;
  double alpha = 0.0;  // fitted exponent of 1 - overlap near r = 0
  bool finite = true;
  double total() const { return grid_part + tail; }
};

// Quadrature of (1 - <T_r(b)F,F>)^{1/2} d*r over the grid window capped at
// r = 1, plus an analytic small-r tail from the fitted exponent.
SummabilityCertificate summability_certificate(const RegularKernel& kernel, const Element& b,
                                               const RadialMeasure& meas);

}  // namespace specrep

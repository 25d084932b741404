#pragma once

#include <Eigen/Dense>

#include <string>

#include "specrep/heisenberg.hpp"

namespace specrep {

// Element of U(n,1) preserving the Hermitian form
//   J = [[0,0,1],[0,I,0],[1,0,0]]
// on homogeneous coordinates (a, b, 1) of the domain a + conj(a) + b b^* < 0.
// J is diag(1,..,1,-1) in the rotated basis that block-diagonalizes the
// stabilizer of v0 = (-1, 0).
class UnMatrix {
 public:
  UnMatrix(Eigen::MatrixXcd m, double tol = 1e-10);

  const Eigen::MatrixXcd& m() const { return m_; }
  int n() const { return static_cast<int>(m_.rows()) - 1; }
  double j_defect() const;
  UnMatrix inverse() const;  // J g^* J

  static Eigen::MatrixXcd form_J(int n);
  static UnMatrix identity(int n);
  // Basis change S with S J_d S = J, J_d = diag(1,...,1,-1); used to read
  // the stabilizer of v0 as the standard block U(n) x U(1).
  static Eigen::MatrixXcd basis_to_diagonal(int n);

 private:
  Eigen::MatrixXcd m_;
};

UnMatrix un_mul(const UnMatrix& a, const UnMatrix& b);

// Loads a matrix sample {"n": n, "entries": [[re, im], ...]} (row-major over
// the (n+1) x (n+1) block) and validates the J-invariant.
UnMatrix un_from_json_file(const std::string& path);

// Explicit J-unitary realization of P = R*_+ x| N:
//   heis part  [[1, z0^T, zeta0], [0, I, -conj(z0)], [0, 0, 1]]
//   scale part diag(1/r0, I, r0)
// p = (r0, n0) maps to scale(r0) * heis(n0); this is a homomorphism for
// the semidirect law (r1 r2, dilate(r2, g1) g2).
UnMatrix p_matrix_heis(const HeisElement& g);
UnMatrix p_matrix_scale(int n, double r0);
UnMatrix p_matrix(double r0, const HeisElement& g);

// Projective action on the domain through homogeneous coordinates.
// Throws domain_error when the image degenerates to the boundary.
DomainPoint mobius_action(const UnMatrix& g, const DomainPoint& v);

struct PuDecomposition {
  double r0 = 1.0;
  HeisElement heis;
  UnMatrix u;  // stabilizer part, fixes v0
};

// Unique factorization g = matrix(p) u with p in P and u fixing v0.
PuDecomposition pu_decompose(const UnMatrix& g);

// Action of P on domain points matching the special representation:
// the heis part sends (a, b) to (a + zeta0 + (z0, b), b - conj(z0)), the
// scale part to (a / r0^2, b / r0).
DomainPoint p_domain_action(double r0, const HeisElement& g, const DomainPoint& v);

// Symbolic difference of coherent sections f_{v1} - f_{v2} (the total set M).
struct CoherentDifference {
  DomainPoint v1, v2;
};

// T~(g)(f_{v1} - f_{v2}) = f_{g v1} - f_{g v2}.
CoherentDifference extended_apply(const UnMatrix& g, const CoherentDifference& d);

// 1-cocycle b(g) = f_{g v0} - f_{v0}.
CoherentDifference un_cocycle(const UnMatrix& g);

double un_cocycle_norm2(const UnMatrix& g);

// lambda(g0, g) = -||b(g0)||^2/2 - Re<b(g0), f> - <T~(g0) b(g), T~(g0) f>
//               + <b(g), f>, inner products in K with f the base section.
cplx lambda_multiplier(const UnMatrix& g0, const UnMatrix& g);

// rho(g1, g2) = -Im<b(g2), b(g1^{-1})> + Im<b(g1 g2) - b(g1) - b(g2), f>.
double rho_multiplier(const UnMatrix& g1, const UnMatrix& g2);

}  // namespace specrep

#include "specrep/un1.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace specrep {

Eigen::MatrixXcd UnMatrix::form_J(int n) {
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  J(0, n) = 1.0;
  J(n, 0) = 1.0;
  for (int i = 1; i < n; ++i) J(i, i) = 1.0;
  return J;
}

UnMatrix::UnMatrix(Eigen::MatrixXcd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 3)
    throw std::invalid_argument("UnMatrix: need a square matrix of size n+1 >= 3");
  if (j_defect() > tol)
    throw std::invalid_argument("UnMatrix: g*Jg != J beyond tolerance");
}

double UnMatrix::j_defect() const {
  const Eigen::MatrixXcd J = form_J(n());
  return (m_.adjoint() * J * m_ - J).cwiseAbs().maxCoeff();
}

UnMatrix UnMatrix::inverse() const {
  const Eigen::MatrixXcd J = form_J(n());
  return UnMatrix(J * m_.adjoint() * J, 1e-8);
}

UnMatrix UnMatrix::identity(int n) {
  return UnMatrix(Eigen::MatrixXcd::Identity(n + 1, n + 1));
}

Eigen::MatrixXcd UnMatrix::basis_to_diagonal(int n) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n + 1, n + 1);
  S(0, 0) = s;
  S(0, n) = s;
  S(n, 0) = s;
  S(n, n) = -s;
  for (int i = 1; i < n; ++i) S(i, i) = 1.0;
  return S;
}

UnMatrix un_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(ss.str());
  const int n = j.at("n").get<int>();
  const auto entries = j.at("entries").get<std::vector<std::vector<double>>>();
  const int dim = n + 1;
  if (static_cast<int>(entries.size()) != dim * dim)
    throw std::invalid_argument("matrix json: expected (n+1)^2 entries");
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int k = 0; k < dim; ++k) {
      const auto& e = entries[static_cast<std::size_t>(i * dim + k)];
      if (e.size() != 2) throw std::invalid_argument("matrix json: entries must be [re, im] pairs");
      m(i, k) = cplx(e[0], e[1]);
    }
  return UnMatrix(std::move(m));
}

UnMatrix un_mul(const UnMatrix& a, const UnMatrix& b) {
  return UnMatrix(a.m() * b.m(), 1e-8);
}

UnMatrix p_matrix_heis(const HeisElement& g) {
  const int n = g.n();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  for (int i = 0; i < n - 1; ++i) {
    m(0, 1 + i) = g.z[i];
    m(1 + i, n) = -std::conj(g.z[i]);
  }
  m(0, n) = g.zeta;
  return UnMatrix(std::move(m));
}

UnMatrix p_matrix_scale(int n, double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("p_matrix_scale: scale must be positive");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n + 1, n + 1);
  m(0, 0) = 1.0 / r0;
  m(n, n) = r0;
  return UnMatrix(std::move(m));
}

UnMatrix p_matrix(double r0, const HeisElement& g) {
  return un_mul(p_matrix_scale(g.n(), r0), p_matrix_heis(g));
}

DomainPoint mobius_action(const UnMatrix& g, const DomainPoint& v) {
  const int n = g.n();
  if (static_cast<int>(v.b.size()) != n - 1)
    throw std::invalid_argument("mobius_action: dimension mismatch");
  Eigen::VectorXcd xi(n + 1);
  xi[0] = v.a;
  for (int i = 0; i < n - 1; ++i) xi[1 + i] = v.b[i];
  xi[n] = 1.0;
  Eigen::VectorXcd eta = g.m() * xi;
  if (std::abs(eta[n]) < 1e-12)
    throw std::domain_error("mobius_action: image at infinity");
  DomainPoint w;
  w.a = eta[0] / eta[n];
  w.b = eta.segment(1, n - 1) / eta[n];
  if (w.q() > -1e-12) throw std::domain_error("mobius_action: image leaves the numeric domain");
  return w;
}

PuDecomposition pu_decompose(const UnMatrix& g) {
  const int n = g.n();
  const DomainPoint w = mobius_action(g, DomainPoint::base(n));
  const double q = w.q();
  const double r0 = std::sqrt(-2.0 / q);
  HeisElement h;
  h.z = -r0 * w.b.conjugate();
  h.zeta = 1.0 + r0 * r0 * w.a;
  // Re zeta + |z|^2/2 = 1 + r0^2 q / 2 = 0 by the choice of r0.
  PuDecomposition out{r0, h, un_mul(p_matrix(r0, h).inverse(), g)};
  return out;
}

DomainPoint p_domain_action(double r0, const HeisElement& g, const DomainPoint& v) {
  DomainPoint w;
  cplx zb{0.0, 0.0};
  for (int i = 0; i < g.z.size(); ++i) zb += g.z[i] * v.b[i];
  w.a = (v.a + g.zeta + zb) / (r0 * r0);
  w.b = (v.b - g.z.conjugate()) / r0;
  return w;
}

CoherentDifference extended_apply(const UnMatrix& g, const CoherentDifference& d) {
  return {mobius_action(g, d.v1), mobius_action(g, d.v2)};
}

CoherentDifference un_cocycle(const UnMatrix& g) {
  const DomainPoint v0 = DomainPoint::base(g.n());
  return {mobius_action(g, v0), v0};
}

double un_cocycle_norm2(const UnMatrix& g) {
  const DomainPoint v0 = DomainPoint::base(g.n());
  const DomainPoint w = mobius_action(g, v0);
  const cplx n2 =
      coherent_pair_integral(w, v0, w) - coherent_pair_integral(w, v0, v0);
  return n2.real();
}

cplx lambda_multiplier(const UnMatrix& g0, const UnMatrix& g) {
  const DomainPoint v0 = DomainPoint::base(g0.n());
  const DomainPoint w0 = mobius_action(g0, v0);
  const DomainPoint w = mobius_action(g, v0);
  const DomainPoint w0w = mobius_action(g0, w);

  const double b0_norm2 =
      (coherent_pair_integral(w0, v0, w0) - coherent_pair_integral(w0, v0, v0)).real();
  const cplx b0_f = coherent_pair_integral(w0, v0, v0);
  const cplx moved = coherent_pair_integral(w0w, w0, w0);
  const cplx b_f = coherent_pair_integral(w, v0, v0);
  return -0.5 * b0_norm2 - b0_f.real() - moved + b_f;
}

double rho_multiplier(const UnMatrix& g1, const UnMatrix& g2) {
  const DomainPoint v0 = DomainPoint::base(g1.n());
  const DomainPoint w1 = mobius_action(g1, v0);
  const DomainPoint w2 = mobius_action(g2, v0);
  const DomainPoint w1inv = mobius_action(g1.inverse(), v0);
  const DomainPoint w12 = mobius_action(g1, w2);

  const cplx b2_b1inv =
      coherent_pair_integral(w2, v0, w1inv) - coherent_pair_integral(w2, v0, v0);
  const cplx sum_f = coherent_pair_integral(w12, v0, v0) - coherent_pair_integral(w1, v0, v0) -
                     coherent_pair_integral(w2, v0, v0);
  return -b2_b1inv.imag() + sum_f.imag();
}

}  // namespace specrep

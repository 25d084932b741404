#include "specrep/heisenberg.hpp"

#include <cmath>
#include <stdexcept>

#include "specrep/quadrature.hpp"

namespace specrep {

HeisElement HeisElement::identity(int n) {
  HeisElement e;
  e.z = Eigen::VectorXcd::Zero(n - 1);
  return e;
}

HeisElement HeisElement::make(double t, const Eigen::VectorXcd& z) {
  HeisElement g;
  g.z = z;
  g.zeta = cplx(-0.5 * z.squaredNorm(), t);
  return g;
}

double HeisElement::constraint_defect() const {
  return std::abs(zeta.real() + 0.5 * z.squaredNorm());
}

static void check_heis(const HeisElement& g, const char* op) {
  if (g.constraint_defect() > 1e-12)
    throw std::invalid_argument(std::string(op) + ": Re zeta + |z|^2/2 = 0 violated");
}

HeisElement heis_mul(const HeisElement& a, const HeisElement& b) {
  check_heis(a, "heis_mul");
  check_heis(b, "heis_mul");
  if (a.z.size() != b.z.size()) throw std::invalid_argument("heis_mul: dimension mismatch");
  HeisElement c;
  // z1 z2^* = sum z1_i conj(z2_i); Eigen's dot conjugates the *first*
  // argument, so this is b.z.dot(a.z).
  c.zeta = a.zeta + b.zeta - b.z.dot(a.z);
  c.z = a.z + b.z;
  return c;
}

HeisElement heis_inv(const HeisElement& a) {
  check_heis(a, "heis_inv");
  HeisElement c;
  c.zeta = std::conj(a.zeta);
  c.z = -a.z;
  return c;
}

HeisElement heis_dilate(double r, const HeisElement& a) {
  if (!(r > 0.0)) throw std::invalid_argument("heis_dilate: scale must be positive");
  HeisElement c;
  c.zeta = r * r * a.zeta;
  c.z = r * a.z;
  return c;
}

FockTruncation::FockTruncation(int n, int max_degree) : n_(n), max_degree_(max_degree) {
  if (n < 2) throw std::invalid_argument("FockTruncation: need n >= 2");
  if (max_degree < 0) throw std::invalid_argument("FockTruncation: negative degree");
  const int v = n - 1;
  // Graded enumeration of multi-indices |alpha| <= D.
  std::vector<int> alpha(static_cast<std::size_t>(v), 0);
  for (int deg = 0; deg <= max_degree; ++deg) {
    std::fill(alpha.begin(), alpha.end(), 0);
    alpha[0] = deg;
    while (true) {
      multi_.push_back(alpha);
      degree_.push_back(deg);
      double g = 1.0;
      for (int ai : alpha)
        for (int k = 2; k <= ai; ++k) g *= k;
      gram_.push_back(g);
      // next composition of deg into v parts (colex-style)
      int i = 0;
      while (i < v - 1 && alpha[static_cast<std::size_t>(i)] == 0) ++i;
      if (i >= v - 1) break;
      const int take = alpha[static_cast<std::size_t>(i)];
      alpha[static_cast<std::size_t>(i)] = 0;
      alpha[0] = take - 1;
      ++alpha[static_cast<std::size_t>(i + 1)];
    }
  }
}

int FockTruncation::find(const std::vector<int>& alpha) const {
  int deg = 0;
  for (int a : alpha) deg += a;
  if (deg > max_degree_) return -1;
  for (std::size_t i = 0; i < multi_.size(); ++i) {
    if (degree_[i] != deg) continue;
    if (multi_[i] == alpha) return static_cast<int>(i);
  }
  return -1;
}

cplx fock_inner(const FockTruncation& tr, const FockVector& f, const FockVector& g) {
  cplx s{0.0, 0.0};
  for (int i = 0; i < tr.dim(); ++i) s += f[i] * std::conj(g[i]) * tr.gram(i);
  return s;
}

double fock_norm(const FockTruncation& tr, const FockVector& f) {
  return std::sqrt(std::max(0.0, fock_inner(tr, f, f).real()));
}

FockVector fock_vacuum(const FockTruncation& tr) {
  FockVector v = FockVector::Zero(tr.dim());
  v[0] = 1.0;
  return v;
}

Eigen::MatrixXcd irrep_matrix(const FockTruncation& tr, const HeisElement& g) {
  check_heis(g, "irrep_matrix");
  if (g.n() != tr.n()) throw std::invalid_argument("irrep_matrix: dimension mismatch");
  const int dim = tr.dim();
  const int vars = tr.vars();

  // Shift part: z^alpha -> prod (z_i + z0_i)^{alpha_i}, degree non-increasing.
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    const auto& alpha = tr.index(col);
    std::vector<int> beta(static_cast<std::size_t>(vars), 0);
    // Enumerate all beta <= alpha with binomial weights.
    std::vector<std::vector<cplx>> pow_z0(static_cast<std::size_t>(vars));
    for (int i = 0; i < vars; ++i) {
      pow_z0[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(alpha[static_cast<std::size_t>(i)]) + 1);
      pow_z0[static_cast<std::size_t>(i)][0] = 1.0;
      for (int k = 1; k <= alpha[static_cast<std::size_t>(i)]; ++k)
        pow_z0[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            pow_z0[static_cast<std::size_t>(i)][static_cast<std::size_t>(k - 1)] * g.z[i];
    }
    while (true) {
      cplx w{1.0, 0.0};
      for (int i = 0; i < vars; ++i) {
        const int ai = alpha[static_cast<std::size_t>(i)];
        const int bi = beta[static_cast<std::size_t>(i)];
        double binom = 1.0;
        for (int k = 0; k < ai - bi; ++k) binom = binom * (ai - k) / (k + 1);
        w *= binom * pow_z0[static_cast<std::size_t>(i)][static_cast<std::size_t>(ai - bi)];
      }
      const int row = tr.find(beta);
      S(row, col) += w;
      // next beta <= alpha
      int i = 0;
      while (i < vars && beta[static_cast<std::size_t>(i)] == alpha[static_cast<std::size_t>(i)]) {
        beta[static_cast<std::size_t>(i)] = 0;
        ++i;
      }
      if (i >= vars) break;
      ++beta[static_cast<std::size_t>(i)];
    }
  }

  // Multiplication by e^{zeta0} e^{-(z, conj(z0))}: each monomial z^gamma
  // carries (-conj(z0))^gamma / gamma!.
  Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(dim, dim);
  const cplx phase = std::exp(g.zeta);
  for (int col = 0; col < dim; ++col) {
    const auto& alpha = tr.index(col);
    const int room = tr.max_degree() - tr.degree(col);
    for (int row = 0; row < dim; ++row) {
      const auto& target = tr.index(row);
      bool ok = tr.degree(row) - tr.degree(col) >= 0 && tr.degree(row) - tr.degree(col) <= room;
      if (!ok) continue;
      cplx w{1.0, 0.0};
      double fact = 1.0;
      for (int i = 0; i < vars && ok; ++i) {
        const int gi = target[static_cast<std::size_t>(i)] - alpha[static_cast<std::size_t>(i)];
        if (gi < 0) {
          ok = false;
          break;
        }
        for (int k = 1; k <= gi; ++k) {
          w *= -std::conj(g.z[i]);
          fact *= k;
        }
      }
      if (!ok) continue;
      E(row, col) += w / fact;
    }
  }
  return phase * (E * S);
}

FockVector irrep_apply(const FockTruncation& tr, const HeisElement& g, const FockVector& f) {
  return irrep_matrix(tr, g) * f;
}

// ---- declared truncation bounds ----------------------------------------

static double log_factorial(int k) {
  double s = 0.0;
  for (int i = 2; i <= k; ++i) s += std::log(static_cast<double>(i));
  return s;
}

static double log_binom(int n, int k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// ||(1 - P_D) T(g) f|| for unit f with deg f <= m: writing T(g) f =
// e^{zeta0} e^{-(z, conj z0)} f(. + z0), the discarded terms need at least
// K = D - m + 1 powers of the multiplier; each power of (z, w) raises the
// norm by at most ||w|| sqrt(deg + 1) and the shifted factor has norm at
// most sqrt(e) (1 + ||z0||^2)^{m/2}.
double fock_tail_bound(int max_degree, int subspace_degree, double z0_norm) {
  const int D = max_degree;
  const int m = subspace_degree;
  const int K = D - m + 1;
  const double s = z0_norm;
  if (s == 0.0) return 0.0;
  const double shift_norm = std::sqrt(std::exp(1.0)) * std::pow(1.0 + s * s, 0.5 * m);
  const double lead =
      std::exp(static_cast<double>(K) * std::log(s) + 0.5 * log_binom(m + K, K) - 0.5 * log_factorial(K));
  // Ratio of consecutive terms s sqrt(m+k+1)/(k+1) at k = K, monotone down.
  const double ratio = s * std::sqrt(static_cast<double>(m + K + 1)) / (K + 1);
  const double geom = ratio < 0.999 ? 1.0 / (1.0 - ratio) : 1e3;
  return std::exp(-0.5 * s * s) * shift_norm * geom * lead;
}

double fock_eps_inner(int max_degree, int subspace_degree, double z0_norm) {
  const double t = fock_tail_bound(max_degree, subspace_degree, z0_norm);
  return t * t;
}

double fock_eps_op(int max_degree, int subspace_degree, double z0_norm) {
  return 2.0 * fock_tail_bound(max_degree, subspace_degree, z0_norm);
}

// ---- coherent sections ---------------------------------------------------

DomainPoint DomainPoint::base(int n) {
  DomainPoint v;
  v.a = cplx(-1.0, 0.0);
  v.b = Eigen::VectorXcd::Zero(n - 1);
  return v;
}

FockVector coherent_fiber(const FockTruncation& tr, const DomainPoint& v, double r) {
  FockVector f = FockVector::Zero(tr.dim());
  const cplx scale = std::exp(r * r * v.a);
  for (int i = 0; i < tr.dim(); ++i) {
    const auto& alpha = tr.index(i);
    cplx w{1.0, 0.0};
    double fact = 1.0;
    for (int t = 0; t < tr.vars(); ++t) {
      for (int k = 1; k <= alpha[static_cast<std::size_t>(t)]; ++k) {
        w *= r * v.b[t];
        fact *= k;
      }
    }
    f[i] = scale * w / fact;
  }
  return f;
}

std::vector<FockVector> coherent_section(const FockTruncation& tr, const RadialGrid& grid,
                                         const DomainPoint& v) {
  std::vector<FockVector> out;
  out.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) out.push_back(coherent_fiber(tr, v, grid.node(i)));
  return out;
}

cplx coherent_B(const DomainPoint& v, const DomainPoint& w) {
  // (b, conj(b')) = sum b_i conj(b'_i); Eigen dot conjugates the first arg.
  return v.a + std::conj(w.a) + w.b.dot(v.b);
}

cplx coherent_pair_integral(const DomainPoint& v1, const DomainPoint& v2, const DomainPoint& v3) {
  const cplx B1 = coherent_B(v1, v3);
  const cplx B2 = coherent_B(v2, v3);
  if (B1.real() >= -1e-9 || B2.real() >= -1e-9)
    throw std::domain_error("coherent_pair_integral: kernel exponent not decaying");
  // int_0^inf (e^{r^2 B1} - e^{r^2 B2}) d*r = (1/2) int_0^inf (e^{t B1} - e^{t B2}) dt/t.
  const double t_min = 1e-5;
  const double t_max = 60.0 / std::min(-B1.real(), -B2.real());
  auto re = [&](double s) {
    const double t = std::exp(s);
    return (std::exp(t * B1) - std::exp(t * B2)).real();
  };
  auto im = [&](double s) {
    const double t = std::exp(s);
    return (std::exp(t * B1) - std::exp(t * B2)).imag();
  };
  const double s0 = std::log(t_min), s1 = std::log(t_max);
  cplx integral(integrate_adaptive(re, s0, s1, 1e-14), integrate_adaptive(im, s0, s1, 1e-14));
  // Series tail below t_min: sum_k (B1^k - B2^k) t_min^k / (k k!).
  cplx tail{0.0, 0.0};
  cplx p1{1.0, 0.0}, p2{1.0, 0.0};
  double fact = 1.0;
  for (int k = 1; k <= 24; ++k) {
    p1 *= B1 * t_min;
    p2 *= B2 * t_min;
    fact *= k;
    tail += (p1 - p2) / (fact * k);
  }
  return 0.5 * (integral + tail);
}

cplx coherent_pair_closed_form(const DomainPoint& v1, const DomainPoint& v2,
                               const DomainPoint& v3) {
  const cplx B1 = coherent_B(v1, v3);
  const cplx B2 = coherent_B(v2, v3);
  return 0.5 * std::log(B2 / B1);
}

}  // namespace specrep

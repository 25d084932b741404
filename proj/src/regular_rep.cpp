#include "specrep/regular_rep.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "specrep/pairwise.hpp"
#include "specrep/quadrature.hpp"
#include "specrep/rng.hpp"

namespace specrep {

namespace {

Eigen::VectorXd level_block(const Element& a, int level) {
  const auto& alg = *a.algebra;
  const int off = alg.level_offset(level);
  const int d = alg.level_dim(level);
  Eigen::VectorXd v(d);
  for (int t = 0; t < d; ++t) v[t] = a.coords[static_cast<std::size_t>(off + t)];
  return v;
}

}  // namespace

GaussianVector::GaussianVector(AlgebraPtr algebra, std::vector<Eigen::MatrixXd> forms)
    : algebra_(std::move(algebra)), forms_(std::move(forms)) {
  const int n = algebra_->class_n();
  if (static_cast<int>(forms_.size()) != n)
    throw std::invalid_argument("GaussianVector: one quadratic form per level required");
  for (int lv = 1; lv <= n; ++lv) {
    Eigen::MatrixXd& M = forms_[static_cast<std::size_t>(lv - 1)];
    const int d = algebra_->level_dim(lv);
    if (M.rows() != d || M.cols() != d)
      throw std::invalid_argument("GaussianVector: form dimension mismatch");
    M = 0.5 * (M + M.transpose().eval());
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("GaussianVector: form is not positive definite");
    llt_.push_back(llt);
    // int e^{-2 x^T M x} dx = pi^{d/2} / sqrt(det(2M))
    const double logdet2M = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum() +
                            d * std::log(2.0);
    norm_const_.push_back(std::exp(0.5 * d * std::log(std::numbers::pi) - 0.5 * logdet2M));
  }
}

double GaussianVector::mu(const Element& a) const {
  double s = 0.0;
  for (int lv = 1; lv <= algebra_->class_n(); ++lv) {
    Eigen::VectorXd x = level_block(a, lv);
    s += x.dot(forms_[static_cast<std::size_t>(lv - 1)] * x);
  }
  return s;
}

GaussianVector GaussianVector::diagonal(const AlgebraPtr& alg,
                                        const std::vector<std::vector<double>>& diags) {
  std::vector<Eigen::MatrixXd> forms;
  for (int lv = 1; lv <= alg->class_n(); ++lv) {
    const auto& dd = diags[static_cast<std::size_t>(lv - 1)];
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(alg->level_dim(lv), alg->level_dim(lv));
    for (int t = 0; t < alg->level_dim(lv); ++t) M(t, t) = dd[static_cast<std::size_t>(t)];
    forms.push_back(std::move(M));
  }
  return GaussianVector(alg, std::move(forms));
}

GaussianVector GaussianVector::isotropic(const AlgebraPtr& alg, double coeff) {
  std::vector<std::vector<double>> diags;
  for (int lv = 1; lv <= alg->class_n(); ++lv)
    diags.emplace_back(static_cast<std::size_t>(alg->level_dim(lv)), coeff);
  return diagonal(alg, diags);
}

RegularKernel::RegularKernel(GaussianVector F, long mc_samples, std::uint64_t mc_seed)
    : F_(std::move(F)), mc_samples_(mc_samples), mc_seed_(mc_seed) {
  if (F_.algebra()->class_n() > 3)
    throw std::invalid_argument("RegularKernel: classes above 3 are not supported");
}

// Class <= 2: with c = (c1, c2), integrating out a_2 leaves a Gaussian in
// a_1 with matrix A = 2 M1 + L^T M2 L / 2, shift beta = M1 c1 + L^T M2 c2 / 2
// and constant gamma = mu1(c1) + mu2(c2)/2, where L a = [a, c1]/2.
double RegularKernel::log_overlap_exact(const Element& c) const {
  const auto& alg = *F_.algebra();
  const int n = alg.class_n();
  const Eigen::MatrixXd& M1 = F_.form(1);
  const int d1 = alg.level_dim(1);
  Eigen::VectorXd c1 = level_block(c, 1);

  if (n == 1) {
    // log K = -mu1(c1)/2 exactly.
    return -0.5 * c1.dot(M1 * c1);
  }

  const Eigen::MatrixXd& M2 = F_.form(2);
  const int d2 = alg.level_dim(2);
  Eigen::VectorXd c2 = level_block(c, 2);

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d2, d1);
  const int off1 = alg.level_offset(1);
  const int off2 = alg.level_offset(2);
  // The level-2 component of [e_t, c] only sees c1, so L is exactly
  // a |-> [a, c1]/2 restricted to R_2.
  for (int t = 0; t < d1; ++t) {
    Element br = bracket(alg.basis_element(off1 + t), c);
    for (int s = 0; s < d2; ++s) L(s, t) = 0.5 * br.coords[static_cast<std::size_t>(off2 + s)];
  }

  Eigen::MatrixXd A = 2.0 * M1 + 0.5 * L.transpose() * M2 * L;
  Eigen::VectorXd beta = M1 * c1 + 0.5 * L.transpose() * M2 * c2;
  const double gamma = c1.dot(M1 * c1) + 0.5 * c2.dot(M2 * c2);

  Eigen::LLT<Eigen::MatrixXd> lltA(A);
  const double logdetA = 2.0 * Eigen::MatrixXd(lltA.matrixL()).diagonal().array().log().sum();
  const double logdet2M1 =
      2.0 * Eigen::MatrixXd(Eigen::LLT<Eigen::MatrixXd>(2.0 * M1).matrixL()).diagonal().array().log().sum();
  const double quad = beta.dot(lltA.solve(beta));
  return -gamma + quad + 0.5 * (logdet2M1 - logdetA);
}

OverlapValue RegularKernel::overlap_mc(const Element& c) const {
  const auto& alg = *F_.algebra();
  const int n = alg.class_n();
  // Deterministic per-argument stream: quantized coordinates hashed into
  // the seed so repeated evaluations agree and distinct arguments are
  // independent.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ mc_seed_;
  for (double x : c.coords) {
    const auto q = static_cast<std::int64_t>(std::llround(x * 1e13));
    h = (h ^ static_cast<std::uint64_t>(q)) * 0x100000001b3ULL;
  }
  Rng rng(h);

  std::vector<Eigen::MatrixXd> half(static_cast<std::size_t>(n));
  for (int lv = 1; lv <= n; ++lv) {
    // Samples of density prop. to e^{-2 mu}: x = L^{-T} xi / 2 for M = L L^T.
    Eigen::LLT<Eigen::MatrixXd> llt(F_.form(lv));
    half[static_cast<std::size_t>(lv - 1)] =
        0.5 * Eigen::MatrixXd(llt.matrixL()).transpose().inverse();
  }

  double sum = 0.0, sumsq = 0.0;
  Element a = alg.zero();
  for (long s = 0; s < mc_samples_; ++s) {
    for (int lv = 1; lv <= n; ++lv) {
      const int d = alg.level_dim(lv);
      Eigen::VectorXd xi(d);
      for (int t = 0; t < d; ++t) xi[t] = rng.normal();
      Eigen::VectorXd x = half[static_cast<std::size_t>(lv - 1)] * xi;
      const int off = alg.level_offset(lv);
      for (int t = 0; t < d; ++t) a.coords[static_cast<std::size_t>(off + t)] = x[t];
    }
    Element ac = group_mul(a, c);
    const double w = std::exp(-(F_.mu(ac) - F_.mu(a)));
    sum += w;
    sumsq += w * w;
  }
  const double N = static_cast<double>(mc_samples_);
  OverlapValue out;
  out.value = sum / N;
  const double var = std::max(0.0, (sumsq / N - out.value * out.value) / (N - 1.0));
  out.stderr_est = std::sqrt(var);
  out.log_value = std::log(std::max(out.value, 1e-300));
  out.monte_carlo = true;
  return out;
}

OverlapValue RegularKernel::overlap_shift(const Element& c) const {
  if (exact_path()) {
    OverlapValue out;
    out.log_value = log_overlap_exact(c);
    out.value = std::exp(out.log_value);
    return out;
  }
  return overlap_mc(c);
}

OverlapValue RegularKernel::overlap(const Element& b, double r) const {
  return overlap_shift(dilate(r, b));
}

std::vector<double> ShiftPolynomials::q(const Element& a, int level) const {
  Element s = shifted(a);
  const auto& alg = *a.algebra;
  const int off = alg.level_offset(level);
  const int d = alg.level_dim(level);
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int t = 0; t < d; ++t)
    out[static_cast<std::size_t>(t)] =
        (s.coords[static_cast<std::size_t>(off + t)] - a.coords[static_cast<std::size_t>(off + t)]) / r;
  return out;
}

RegularFamily::Vector RegularFamily::base() const {
  Vector v;
  v.terms.emplace_back(1.0, algebra()->zero());
  return v;
}

RegularFamily::Vector RegularFamily::apply(double r, const Group& g, const Vector& v) const {
  Vector out;
  const Element gr = dilate(r, g);
  out.terms.reserve(v.terms.size());
  for (const auto& [c, b] : v.terms) out.terms.emplace_back(c, group_mul(gr, b));
  return out;
}

void RegularFamily::merge(Vector& v) {
  Vector merged;
  for (auto& [c, b] : v.terms) {
    bool found = false;
    for (auto& [mc, mb] : merged.terms) {
      double diff = 0.0, scale = 1.0;
      for (std::size_t t = 0; t < b.coords.size(); ++t) {
        diff = std::max(diff, std::abs(b.coords[t] - mb.coords[t]));
        scale = std::max(scale, std::abs(mb.coords[t]));
      }
      if (diff <= 1e-12 * scale) {
        mc += c;
        found = true;
        break;
      }
    }
    if (!found) merged.terms.emplace_back(c, b);
  }
  std::erase_if(merged.terms, [](const auto& t) { return std::abs(t.first) == 0.0; });
  v = std::move(merged);
}

InnerValue RegularFamily::inner_with_err(const Vector& v, const Vector& w) const {
  Vector a = v, b = w;
  merge(a);
  merge(b);
  InnerValue out;
  double var = 0.0;
  for (const auto& [ca, ba] : a.terms) {
    for (const auto& [cb, bb] : b.terms) {
      const OverlapValue k = kernel_.overlap_shift(group_mul(group_inv(bb), ba));
      const std::complex<double> c = ca * std::conj(cb);
      out.value += c * k.value;
      var += std::norm(c) * k.stderr_est * k.stderr_est;
    }
  }
  out.stderr_est = std::sqrt(var);
  return out;
}

std::complex<double> RegularFamily::inner(const Vector& v, const Vector& w) const {
  return inner_with_err(v, w).value;
}

RegularFamily::Vector RegularFamily::add(const Vector& v, const Vector& w) const {
  Vector out = v;
  out.terms.insert(out.terms.end(), w.terms.begin(), w.terms.end());
  merge(out);
  return out;
}

RegularFamily::Vector RegularFamily::scale(std::complex<double> c, const Vector& v) const {
  Vector out = v;
  for (auto& t : out.terms) t.first *= c;
  return out;
}

double bi_overlap_raw(const GaussianVector& F, const GaussianVector& G, const Element& c) {
  const auto& alg = *F.algebra();
  if (G.algebra().get() != F.algebra().get())
    throw std::invalid_argument("bi_overlap_raw: vectors over different algebras");
  const int n = alg.class_n();
  if (n > 2) throw std::invalid_argument("bi_overlap_raw: exact path requires class <= 2");
  const int d1 = alg.level_dim(1);
  const Eigen::MatrixXd& M1 = F.form(1);
  const Eigen::MatrixXd& M1p = G.form(1);
  Eigen::VectorXd c1 = level_block(c, 1);

  if (n == 1) {
    Eigen::MatrixXd A = M1 + M1p;
    Eigen::VectorXd beta = M1 * c1;
    const double gamma = c1.dot(M1 * c1);
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    const double logdetA = 2.0 * Eigen::MatrixXd(llt.matrixL()).diagonal().array().log().sum();
    return std::exp(-gamma + beta.dot(llt.solve(beta)) + 0.5 * d1 * std::log(std::numbers::pi) -
                    0.5 * logdetA);
  }

  const int d2 = alg.level_dim(2);
  const Eigen::MatrixXd& M2 = F.form(2);
  const Eigen::MatrixXd& M2p = G.form(2);
  Eigen::VectorXd c2 = level_block(c, 2);
  const int off1 = alg.level_offset(1);
  const int off2 = alg.level_offset(2);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d2, d1);
  for (int t = 0; t < d1; ++t) {
    Element br = bracket(alg.basis_element(off1 + t), c);
    for (int s = 0; s < d2; ++s) L(s, t) = 0.5 * br.coords[static_cast<std::size_t>(off2 + s)];
  }
  // Integrating out a_2 leaves the reduced form N2 = (M2^{-1} + M2'^{-1})^{-1}
  // acting on the level-2 shift s(a_1) = c2 + L a_1.
  Eigen::MatrixXd sum2 = M2 + M2p;
  Eigen::LLT<Eigen::MatrixXd> llt2(sum2);
  Eigen::MatrixXd N2 = M2 - M2 * llt2.solve(M2);
  Eigen::MatrixXd A = M1 + M1p + L.transpose() * N2 * L;
  Eigen::VectorXd beta = M1 * c1 + L.transpose() * N2 * c2;
  const double gamma = c1.dot(M1 * c1) + c2.dot(N2 * c2);
  Eigen::LLT<Eigen::MatrixXd> lltA(A);
  const double logdetA = 2.0 * Eigen::MatrixXd(lltA.matrixL()).diagonal().array().log().sum();
  const double logdet2 = 2.0 * Eigen::MatrixXd(llt2.matrixL()).diagonal().array().log().sum();
  return std::exp(-gamma + beta.dot(lltA.solve(beta)) +
                  0.5 * (d1 + d2) * std::log(std::numbers::pi) - 0.5 * (logdetA + logdet2));
}

double difference_defect(const GaussianVector& F, const GaussianVector& G, const Element& b,
                         double r) {
  const Element c = dilate(r, b);
  const Element e = F.algebra()->zero();
  const double nF = std::sqrt(bi_overlap_raw(F, F, e));
  const double nG = std::sqrt(bi_overlap_raw(G, G, e));
  // h = (F/||F|| - G/||G||) / ||...||; <T(c)h0, h0> with h0 the unnormalized
  // difference of unit vectors.
  auto cross = [&](const GaussianVector& X, const GaussianVector& Y, double nx, double ny) {
    return bi_overlap_raw(X, Y, c) / (nx * ny);
  };
  const double num = cross(F, F, nF, nF) - cross(F, G, nF, nG) - cross(G, F, nG, nF) +
                     cross(G, G, nG, nG);
  const double den = 2.0 - 2.0 * bi_overlap_raw(F, G, e) / (nF * nG);
  const double inner_h = num / den;
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - inner_h)));
}

std::optional<double> small_r_exponent(const RegularKernel& kernel, const Element& b, double r_lo,
                                       double r_hi, int points) {
  if (b.norm_inf() == 0.0) throw std::invalid_argument("small_r_exponent: b must not be the identity");
  std::vector<double> lx, ly, sigma;
  bool any = false;
  const double step = (std::log(r_hi) - std::log(r_lo)) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double r = std::exp(std::log(r_lo) + step * i);
    const OverlapValue ov = kernel.overlap(b, r);
    double one_minus;
    if (ov.monte_carlo) {
      one_minus = 1.0 - ov.value;
      if (one_minus <= 3.0 * ov.stderr_est) continue;  // indistinguishable from 1 at this r
    } else {
      one_minus = -std::expm1(ov.log_value);
    }
    if (one_minus <= 1e-15) continue;
    any = true;
    lx.push_back(std::log(r));
    ly.push_back(std::log(one_minus));
    sigma.push_back(ov.monte_carlo ? ov.stderr_est / one_minus : 1.0);
  }
  if (!any || lx.size() < 4) return std::nullopt;
  return fit_line(lx, ly, kernel.exact_path() ? nullptr : &sigma).slope;
}

SummabilityCertificate summability_certificate(const RegularKernel& kernel, const Element& b,
                                               const RadialMeasure& meas) {
  SummabilityCertificate out;
  const RadialGrid& grid = meas.grid;
  auto integrand = [&](double r) {
    const OverlapValue ov = kernel.overlap(b, r);
    const double one_minus = ov.monte_carlo ? std::max(0.0, 1.0 - ov.value) : -std::expm1(ov.log_value);
    return std::sqrt(std::max(0.0, one_minus));
  };
  // Trapezoid in log r over the nodes up to the cap at r = 1, with a
  // partial panel ending exactly at the cap.
  std::vector<double> terms;
  int last = -1;
  for (int i = 0; i < grid.size() && grid.node(i) <= 1.0; ++i) last = i;
  for (int i = 0; i <= last; ++i) {
    const double w = (i == 0 || i == last) ? 0.5 * grid.weight(i) : grid.weight(i);
    terms.push_back(w * integrand(grid.node(i)));
  }
  if (last >= 0 && grid.node(last) < 1.0 && last + 1 < grid.size()) {
    const double ds = -std::log(grid.node(last));
    terms.push_back(0.5 * ds * (integrand(grid.node(last)) + integrand(1.0)));
  }
  out.grid_part = pairwise_sum(terms);
  if (b.norm_inf() == 0.0) return out;

  const auto slope = small_r_exponent(kernel, b, grid.node(0), grid.node(0) * 50.0, 9);
  out.alpha = slope.value_or(0.0);
  const OverlapValue ov0 = kernel.overlap(b, grid.node(0));
  const double d0 = std::sqrt(std::max(0.0, ov0.monte_carlo ? 1.0 - ov0.value : -std::expm1(ov0.log_value)));
  if (slope && *slope > 1e-3) {
    out.tail = d0 / (0.5 * *slope);
  } else if (d0 > 1e-12) {
    out.finite = false;
    out.tail = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace specrep

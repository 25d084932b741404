#include "specrep/currents.hpp"

#include <algorithm>
#include <cmath>

namespace specrep {

PCell p_cell_mul(const PCell& a, const PCell& b) {
  return {a.r0 * b.r0, heis_mul(heis_dilate(b.r0, a.g), b.g)};
}

HeisCurrent heis_current_mul(const HeisCurrent& a, const HeisCurrent& b) {
  return pointwise<HeisElement, HeisElement, HeisElement>(
      a, b, [](const HeisElement& x, const HeisElement& y) { return heis_mul(x, y); });
}

PCurrent p_current_mul(const PCurrent& a, const PCurrent& b) {
  return pointwise<PCell, PCell, PCell>(a, b,
                                        [](const PCell& x, const PCell& y) { return p_cell_mul(x, y); });
}

UnCurrent un_current_mul(const UnCurrent& a, const UnCurrent& b) {
  return pointwise<UnMatrix, UnMatrix, UnMatrix>(
      a, b, [](const UnMatrix& x, const UnMatrix& y) { return un_mul(x, y); });
}

ScaleCurrent scale_part(const PCurrent& p) {
  ScaleCurrent out;
  out.breaks = p.breaks;
  out.values.reserve(p.values.size());
  for (const auto& c : p.values) out.values.push_back(c.r0);
  return out;
}

CoherentTensorState coherent_state(const Configuration& omega, const PCurrent& p) {
  CoherentTensorState st;
  st.config = omega;
  st.points.breaks = p.breaks;
  for (const auto& cell : p.values) {
    const DomainPoint v0 = DomainPoint::base(cell.g.n());
    st.points.values.push_back(p_domain_action(cell.r0, cell.g, v0));
  }
  return st;
}

CoherentTensorState coherent_state(const Configuration& omega, const UnCurrent& g) {
  CoherentTensorState st;
  st.config = omega;
  st.points.breaks = g.breaks;
  for (const auto& cell : g.values)
    st.points.values.push_back(mobius_action(cell, DomainPoint::base(cell.n())));
  return st;
}

cplx coherent_tensor_inner(const CoherentTensorState& a, const CoherentTensorState& b) {
  cplx out = a.prefactor * std::conj(b.prefactor);
  for (const auto& y : a.config.points) {
    const DomainPoint& v = a.points.at(y.x);
    const DomainPoint& w = b.points.at(y.x);
    out *= std::exp(y.r * y.r * coherent_B(v, w));
  }
  return out;
}

double coherent_tensor_norm(const CoherentTensorState& a) {
  return std::sqrt(std::max(0.0, coherent_tensor_inner(a, a).real()));
}

TensorState<FockFamily> realize(const FockFamily& fam, const CoherentTensorState& st) {
  TensorState<FockFamily> out;
  out.config = st.config;
  out.prefactor = st.prefactor;
  out.factors.reserve(st.config.points.size());
  for (const auto& y : st.config.points)
    out.factors.push_back(coherent_fiber(fam.truncation(), st.points.at(y.x), y.r));
  return out;
}

CoherentTensorState heis_current_apply(const PCurrent& p0, const CoherentTensorState& st) {
  CoherentTensorState out;
  out.config = st.config;
  double log_int = 0.0;
  for (std::size_t c = 0; c < p0.values.size(); ++c)
    log_int += (p0.cell_hi(c) - p0.cell_lo(c)) * std::log(p0.values[c].r0);
  out.prefactor = st.prefactor * std::exp(-0.5 * log_int);
  out.points = pointwise<PCell, DomainPoint, DomainPoint>(
      p0, st.points,
      [](const PCell& cell, const DomainPoint& w) { return p_domain_action(cell.r0, cell.g, w); });
  return out;
}

cplx lambda_multiplier_point(const UnMatrix& g0, const DomainPoint& w) {
  const DomainPoint v0 = DomainPoint::base(g0.n());
  const DomainPoint w0 = mobius_action(g0, v0);
  const DomainPoint w0w = mobius_action(g0, w);

  const double b0_norm2 =
      (coherent_pair_integral(w0, v0, w0) - coherent_pair_integral(w0, v0, v0)).real();
  const cplx b0_f = coherent_pair_integral(w0, v0, v0);
  const cplx moved = coherent_pair_integral(w0w, w0, w0);
  const cplx b_f = coherent_pair_integral(w, v0, v0);
  return -0.5 * b0_norm2 - b0_f.real() - moved + b_f;
}

CoherentTensorState un1_current_apply(const UnCurrent& g0, const CoherentTensorState& st) {
  CoherentTensorState out;
  out.config = st.config;
  // exp(int lambda(g0(x), g(x)) dm), exact over the common refinement.
  StepCurrent<cplx> lam = pointwise<UnMatrix, DomainPoint, cplx>(
      g0, st.points,
      [](const UnMatrix& m, const DomainPoint& w) { return lambda_multiplier_point(m, w); });
  cplx lint{0.0, 0.0};
  for (std::size_t c = 0; c < lam.values.size(); ++c)
    lint += (lam.cell_hi(c) - lam.cell_lo(c)) * lam.values[c];
  out.prefactor = st.prefactor * std::exp(lint);
  out.points = pointwise<UnMatrix, DomainPoint, DomainPoint>(
      g0, st.points, [](const UnMatrix& m, const DomainPoint& w) { return mobius_action(m, w); });
  return out;
}

double rho_integral(const UnCurrent& g1, const UnCurrent& g2) {
  StepCurrent<double> rho = pointwise<UnMatrix, UnMatrix, double>(
      g1, g2, [](const UnMatrix& a, const UnMatrix& b) { return rho_multiplier(a, b); });
  double acc = 0.0;
  for (std::size_t c = 0; c < rho.values.size(); ++c)
    acc += (rho.cell_hi(c) - rho.cell_lo(c)) * rho.values[c];
  return acc;
}

}  // namespace specrep

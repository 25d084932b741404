#pragma once

#include <vector>

#include "specrep/heisenberg.hpp"
#include "specrep/poisson.hpp"
#include "specrep/un1.hpp"

namespace specrep {

// Step function X -> G on a finite partition of [0,1].
template <class T>
struct StepCurrent {
  std::vector<double> breaks;  // interior breakpoints, sorted
  std::vector<T> values;       // breaks.size() + 1 cells

  const T& at(double x) const {
    std::size_t cell = 0;
    while (cell < breaks.size() && x >= breaks[cell]) ++cell;
    return values[cell];
  }
  double cell_lo(std::size_t i) const { return i == 0 ? 0.0 : breaks[i - 1]; }
  double cell_hi(std::size_t i) const { return i < breaks.size() ? breaks[i] : 1.0; }
};

// Pointwise combination on the common refinement of two partitions.
template <class A, class B, class C, class F>
StepCurrent<C> pointwise(const StepCurrent<A>& a, const StepCurrent<B>& b, F&& op) {
  StepCurrent<C> out;
  std::vector<double> cuts;
  cuts.insert(cuts.end(), a.breaks.begin(), a.breaks.end());
  cuts.insert(cuts.end(), b.breaks.begin(), b.breaks.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  out.breaks = cuts;
  double lo = 0.0;
  for (std::size_t i = 0; i <= cuts.size(); ++i) {
    const double hi = i < cuts.size() ? cuts[i] : 1.0;
    const double mid = 0.5 * (lo + hi);
    out.values.push_back(op(a.at(mid), b.at(mid)));
    lo = hi;
  }
  return out;
}

// Element of P = R*_+ x| N per cell.
struct PCell {
  double r0 = 1.0;
  HeisElement g;
};

PCell p_cell_mul(const PCell& a, const PCell& b);  // (r1 r2, dilate(r2, g1) g2)

using HeisCurrent = StepCurrent<HeisElement>;  // N^X
using PCurrent = StepCurrent<PCell>;           // P^X
using UnCurrent = StepCurrent<UnMatrix>;       // U(n,1)^X

HeisCurrent heis_current_mul(const HeisCurrent& a, const HeisCurrent& b);
PCurrent p_current_mul(const PCurrent& a, const PCurrent& b);
UnCurrent un_current_mul(const UnCurrent& a, const UnCurrent& b);

ScaleCurrent scale_part(const PCurrent& p);

// Explicit tensor state: per-point factor vectors over a sampled
// configuration, with a scalar prefactor.
template <class Fam>
struct TensorState {
  Configuration config;
  std::vector<typename Fam::Vector> factors;
  cplx prefactor{1.0, 0.0};
};

template <class Fam>
cplx tensor_inner(const Fam& fam, const TensorState<Fam>& a, const TensorState<Fam>& b) {
  cplx out = a.prefactor * std::conj(b.prefactor);
  for (std::size_t i = 0; i < a.factors.size(); ++i) out *= fam.inner(a.factors[i], b.factors[i]);
  return out;
}

// (U(g) F_v)(omega): per-point factor v -> T_r(g(x)) v at the sampled
// radius, configuration transported by the scale part, and the projective
// scalar exp(-1/2 int log r0 dm) of the quasi-Poisson measure.
template <class Fam>
TensorState<Fam> current_apply(const Fam& fam, const PCurrent& g, const TensorState<Fam>& st) {
  TensorState<Fam> out;
  out.config.points.reserve(st.config.points.size());
  out.factors.reserve(st.factors.size());
  double log_int = 0.0;
  for (std::size_t c = 0; c < g.values.size(); ++c)
    log_int += (g.cell_hi(c) - g.cell_lo(c)) * std::log(g.values[c].r0);
  out.prefactor = st.prefactor * std::exp(-0.5 * log_int);
  for (std::size_t i = 0; i < st.config.points.size(); ++i) {
    const PointY& y = st.config.points[i];
    const PCell& cell = g.at(y.x);
    out.config.points.push_back({cell.r0 * y.r, y.x});
    out.factors.push_back(fam.apply(y.r, cell.g, st.factors[i]));
  }
  return out;
}

// Tensor state indexed by a current: factor at (r, x) is the coherent
// section of the transported base point w(x) = g(x) v0 evaluated at r.
// The configuration never moves; P and U(n,1) currents act by index
// transport with their scalar multipliers.
struct CoherentTensorState {
  Configuration config;
  StepCurrent<DomainPoint> points;  // per-cell w(x)
  cplx prefactor{1.0, 0.0};
};

CoherentTensorState coherent_state(const Configuration& omega, const PCurrent& p);
CoherentTensorState coherent_state(const Configuration& omega, const UnCurrent& g);

// Fiberwise inner product in the tensor product over the configuration,
// via the exact coherent kernel e^{r^2 B(v, w)}.
cplx coherent_tensor_inner(const CoherentTensorState& a, const CoherentTensorState& b);
double coherent_tensor_norm(const CoherentTensorState& a);

// Realization with explicit Fock fibers (for path-consistency checks).
TensorState<FockFamily> realize(const FockFamily& fam, const CoherentTensorState& st);

// U(p0) F_p = e^{-1/2 int log r0 dm} F_{p0 p}.
CoherentTensorState heis_current_apply(const PCurrent& p0, const CoherentTensorState& st);

// U(g0) F_g = e^{int lambda(g0(x), g(x)) dm} F_{g0 g}; restriction to P^X
// coincides with heis_current_apply.
CoherentTensorState un1_current_apply(const UnCurrent& g0, const CoherentTensorState& st);

// lambda written on the index point w = g v0 (all terms factor through w).
cplx lambda_multiplier_point(const UnMatrix& g0, const DomainPoint& w);

// int_X rho(g1(x), g2(x)) dm(x), exact cellwise sum.
double rho_integral(const UnCurrent& g1, const UnCurrent& g2);

}  // namespace specrep

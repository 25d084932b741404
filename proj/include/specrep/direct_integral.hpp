#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "specrep/pairwise.hpp"
#include "specrep/quadrature.hpp"
#include "specrep/radial.hpp"

namespace specrep {

// A representation family Fam provides:
//   typename Fam::Group, typename Fam::Vector
//   Vector  apply(double r, const Group& g, const Vector& v)   -- T_r(g) v
//   complex inner(const Vector&, const Vector&)                -- <.,.>_K
//   Vector  add(const Vector&, const Vector&), scale(c, v), zero_vector()
//   Group   identity(), mul(g,h), inverse(g), dilate_group(r, g)
// Families are value types over immutable data; every operation below is a
// pure function of its arguments.

template <class Fam>
struct DirectIntegralVector {
  std::vector<typename Fam::Vector> fibers;
};

// Scale parts of the semidirect group are restricted to integer powers of
// the grid ratio, so the R*_+ action is an exact index shift.
template <class Fam>
struct GridSemidirect {
  int shift = 0;  // scale = ratio^shift
  typename Fam::Group body;
};

template <class Fam>
int shift_from_scale(const RadialGrid& grid, double r0) {
  const double k = std::log(r0) / grid.log_step();
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9)
    throw std::invalid_argument("scale is not an integer power of the grid ratio");
  return static_cast<int>(rounded);
}

template <class Fam>
GridSemidirect<Fam> grid_semidirect_mul(const Fam& fam, const RadialGrid& grid,
                                        const GridSemidirect<Fam>& p, const GridSemidirect<Fam>& q) {
  const double r2 = std::pow(grid.ratio(), q.shift);
  return {p.shift + q.shift, fam.mul(fam.dilate_group(r2, p.body), q.body)};
}

template <class Fam>
double div_norm2(const Fam& fam, const RadialGrid& grid, const DirectIntegralVector<Fam>& f) {
  std::vector<double> terms(f.fibers.size());
  for (std::size_t i = 0; i < f.fibers.size(); ++i)
    terms[i] = grid.weight(static_cast<int>(i)) * std::real(fam.inner(f.fibers[i], f.fibers[i]));
  return pairwise_sum(terms);
}

template <class Fam>
double div_norm(const Fam& fam, const RadialGrid& grid, const DirectIntegralVector<Fam>& f) {
  return std::sqrt(std::max(0.0, div_norm2(fam, grid, f)));
}

template <class Fam>
DirectIntegralVector<Fam> div_sub(const Fam& fam, const DirectIntegralVector<Fam>& a,
                                  const DirectIntegralVector<Fam>& b) {
  DirectIntegralVector<Fam> out;
  out.fibers.reserve(a.fibers.size());
  for (std::size_t i = 0; i < a.fibers.size(); ++i)
    out.fibers.push_back(fam.add(a.fibers[i], fam.scale(-1.0, b.fibers[i])));
  return out;
}

template <class Fam>
DirectIntegralVector<Fam> div_add(const Fam& fam, const DirectIntegralVector<Fam>& a,
                                  const DirectIntegralVector<Fam>& b) {
  DirectIntegralVector<Fam> out;
  out.fibers.reserve(a.fibers.size());
  for (std::size_t i = 0; i < a.fibers.size(); ++i)
    out.fibers.push_back(fam.add(a.fibers[i], b.fibers[i]));
  return out;
}

struct DefectReport {
  double integral = 0.0;       // quadrature of ||T_r(g)h - h|| e^{-u/2} d*r
  double tail_estimate = 0.0;  // analytic continuation below the first node
  double alpha = 0.0;          // fitted small-r exponent of ||T_r(g)h - h||
  bool numerically_invariant = false;
  double total() const { return integral + tail_estimate; }
};

// Quadrature of the defect integral against e^{-u/2} d*r, with a small-r
// tail estimate so
// that convergence vs divergence is distinguishable on a finite grid.
template <class Fam>
DefectReport almost_invariance_defect(const Fam& fam, const RadialMeasure& meas,
                                      const typename Fam::Vector& h,
                                      const typename Fam::Group& g,
                                      int tail_fit_nodes = 8) {
  const double hn = std::abs(std::real(fam.inner(h, h)));
  if (std::abs(hn - 1.0) > 1e-8) throw std::invalid_argument("almost_invariance_defect: h must be a unit vector");
  const RadialGrid& grid = meas.grid;
  const int M = grid.size();
  std::vector<double> defect(static_cast<std::size_t>(M));
  std::vector<double> terms(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double r = grid.node(i);
    auto moved = fam.apply(r, g, h);
    auto diff = fam.add(moved, fam.scale(-1.0, h));
    const double d = std::sqrt(std::max(0.0, std::real(fam.inner(diff, diff))));
    defect[static_cast<std::size_t>(i)] = d;
    terms[static_cast<std::size_t>(i)] = grid.weight(i) * meas.u.half_density(r) * d;
  }
  DefectReport rep;
  rep.integral = pairwise_sum(terms);

  double dmax = 0.0;
  for (double d : defect) dmax = std::max(dmax, d);
  if (dmax < 1e-14) {
    rep.numerically_invariant = true;
    return rep;
  }
  const int W = std::min(tail_fit_nodes, M);
  std::vector<double> lx, ly;
  for (int i = 0; i < W; ++i) {
    if (defect[static_cast<std::size_t>(i)] <= 0.0) continue;
    lx.push_back(std::log(grid.node(i)));
    ly.push_back(std::log(defect[static_cast<std::size_t>(i)]));
  }
  if (lx.size() >= 2) {
    const FitResult fit = fit_line(lx, ly);
    rep.alpha = fit.slope;
    if (fit.slope > 1e-3) {
      // || . || ~ C r^alpha below the window: integral of C r^alpha d*r.
      rep.tail_estimate = defect[0] * meas.u.half_density(0.0) / fit.slope;
    } else {
      rep.tail_estimate = std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

// Least-squares slope of log||T_r(g)h - h|| against log r over the nodes
// inside [r_lo, r_hi]. Empty result means the defect is numerically zero
// across the window.
template <class Fam>
std::optional<double> scaling_exponent(const Fam& fam, const RadialGrid& grid,
                                       const typename Fam::Vector& h,
                                       const typename Fam::Group& g, double r_lo, double r_hi) {
  std::vector<double> lx, ly;
  int in_window = 0;
  double dmax = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    if (r < r_lo || r > r_hi) continue;
    ++in_window;
    auto moved = fam.apply(r, g, h);
    auto diff = fam.add(moved, fam.scale(-1.0, h));
    const double d = std::sqrt(std::max(0.0, std::real(fam.inner(diff, diff))));
    dmax = std::max(dmax, d);
    if (d > 1e-300) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(d));
    }
  }
  if (in_window < 6) throw std::invalid_argument("scaling_exponent: window must contain >= 6 nodes");
  if (dmax < 1e-14 || lx.size() < 2) return std::nullopt;
  return fit_line(lx, ly).slope;
}

// beta(g)(r) = e^{-u(r)/2} (T_r(g) h - h), the canonical cocycle over G_0.
template <class Fam>
DirectIntegralVector<Fam> build_cocycle(const Fam& fam, const RadialMeasure& meas,
                                        const typename Fam::Vector& h,
                                        const typename Fam::Group& g) {
  DirectIntegralVector<Fam> out;
  const RadialGrid& grid = meas.grid;
  out.fibers.reserve(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    auto moved = fam.apply(r, g, h);
    auto diff = fam.add(moved, fam.scale(-1.0, h));
    out.fibers.push_back(fam.scale(meas.u.half_density(r), diff));
  }
  return out;
}

// The canonical section f(r) = e^{-u(r)/2} h.
template <class Fam>
DirectIntegralVector<Fam> base_section(const Fam& fam, const RadialMeasure& meas,
                                       const typename Fam::Vector& h) {
  DirectIntegralVector<Fam> out;
  out.fibers.reserve(static_cast<std::size_t>(meas.grid.size()));
  for (int i = 0; i < meas.grid.size(); ++i)
    out.fibers.push_back(fam.scale(meas.u.half_density(meas.grid.node(i)), h));
  return out;
}

template <class Fam>
struct TildeResult {
  DirectIntegralVector<Fam> value;
  double boundary_loss2 = 0.0;  // weighted norm^2 discarded at the window edge
};

// Action of the semidirect element p = (rho^k, g0):
//   (T~(p) f)(r_i) = T_{r_{i-k}}(g0) f(r_{i-k}),
// an exact reindexing for the scale part (vacated nodes are zero-filled and
// the discarded share is reported) composed with the fiberwise action.
template <class Fam>
TildeResult<Fam> tilde_apply(const Fam& fam, const RadialGrid& grid, const GridSemidirect<Fam>& p,
                             const DirectIntegralVector<Fam>& f) {
  const int M = grid.size();
  TildeResult<Fam> out;
  out.value.fibers.resize(static_cast<std::size_t>(M), fam.zero_vector());
  for (int i = 0; i < M; ++i) {
    const int j = i - p.shift;
    if (j < 0 || j >= M) continue;
    out.value.fibers[static_cast<std::size_t>(i)] =
        fam.apply(grid.node(j), p.body, f.fibers[static_cast<std::size_t>(j)]);
  }
  // Source nodes with no destination inside the window.
  for (int j = 0; j < M; ++j) {
    const int i = j + p.shift;
    if (i >= 0 && i < M) continue;
    out.boundary_loss2 += grid.weight(j) *
        std::real(fam.inner(f.fibers[static_cast<std::size_t>(j)], f.fibers[static_cast<std::size_t>(j)]));
  }
  return out;
}

// One fiber of beta(p) = T~(p) f - f, f(r) = e^{-u(r)/2} h, evaluated at
// an arbitrary radius. The canonical section is formula-defined, so the
// cocycle extends past the window edge instead of inheriting the zero-fill
// of grid sections.
template <class Fam>
typename Fam::Vector cocycle_fiber(const Fam& fam, const UFunction& u,
                                   const typename Fam::Vector& h, const GridSemidirect<Fam>& p,
                                   double log_ratio, double r) {
  const double r_src = r * std::exp(-log_ratio * p.shift);
  auto moved = fam.scale(u.half_density(r_src), fam.apply(r_src, p.body, h));
  return fam.add(moved, fam.scale(-u.half_density(r), h));
}

// beta(p) = T~(p) f - f with f the canonical section. For p in G_0 this
// coincides with build_cocycle.
template <class Fam>
DirectIntegralVector<Fam> full_cocycle(const Fam& fam, const RadialMeasure& meas,
                                       const typename Fam::Vector& h, const GridSemidirect<Fam>& p) {
  DirectIntegralVector<Fam> out;
  out.fibers.reserve(static_cast<std::size_t>(meas.grid.size()));
  for (int i = 0; i < meas.grid.size(); ++i)
    out.fibers.push_back(cocycle_fiber(fam, meas.u, h, p, meas.grid.log_step(), meas.grid.node(i)));
  return out;
}

// || beta(p1 p2) - T~(p1) beta(p2) - beta(p1) ||_K. The middle term reads
// beta(p2) at r / r1, again through the defining formula.
template <class Fam>
double cocycle_identity_defect(const Fam& fam, const RadialMeasure& meas,
                               const typename Fam::Vector& h, const GridSemidirect<Fam>& p1,
                               const GridSemidirect<Fam>& p2) {
  const auto p12 = grid_semidirect_mul(fam, meas.grid, p1, p2);
  const double lh = meas.grid.log_step();
  std::vector<double> terms(static_cast<std::size_t>(meas.grid.size()));
  for (int i = 0; i < meas.grid.size(); ++i) {
    const double r = meas.grid.node(i);
    const double r1 = r * std::exp(-lh * p1.shift);
    auto a = cocycle_fiber(fam, meas.u, h, p12, lh, r);
    auto b = fam.apply(r1, p1.body, cocycle_fiber(fam, meas.u, h, p2, lh, r1));
    auto c = cocycle_fiber(fam, meas.u, h, p1, lh, r);
    auto defect = fam.add(a, fam.scale(-1.0, fam.add(b, c)));
    terms[static_cast<std::size_t>(i)] = meas.grid.weight(i) * std::real(fam.inner(defect, defect));
  }
  return std::sqrt(std::max(0.0, pairwise_sum(terms)));
}

template <class Fam>
struct CohomologyResult {
  DirectIntegralVector<Fam> coboundary;  // (e^{-u/2} - e^{-u0/2}) h per node
  double coboundary_norm = 0.0;
  bool tail_divergence = false;  // small-r tail of the coboundary is not integrable
  double tail_slope = 0.0;
};

// Reduction to the reference weight u0: the two cocycles differ by the
// coboundary of f - f0 = (e^{-u/2} - e^{-u0/2}) h; a finite K-norm
// certifies cohomology. Divergence at the small-r end (u and u0 not both
// vanishing at 0) is reported, not silently integrated.
template <class Fam>
CohomologyResult<Fam> cohomology_reduce(const Fam& fam, const RadialGrid& grid, const UFunction& u,
                                        const UFunction& u0, const typename Fam::Vector& h) {
  CohomologyResult<Fam> out;
  out.coboundary.fibers.reserve(static_cast<std::size_t>(grid.size()));
  std::vector<double> small_vals;
  for (int i = 0; i < grid.size(); ++i) {
    const double r = grid.node(i);
    const double c = u.half_density(r) - u0.half_density(r);
    out.coboundary.fibers.push_back(fam.scale(c, h));
  }
  out.coboundary_norm = div_norm(fam, grid, out.coboundary);

  // Decay diagnostic on the smallest nodes: the tail integrates c(r)^2 d*r,
  // which needs c(r) -> 0 at a positive rate.
  const int W = std::min(8, grid.size());
  std::vector<double> lx, ly;
  double cmax = 0.0;
  for (int i = 0; i < W; ++i) {
    const double r = grid.node(i);
    const double c = std::abs(u.half_density(r) - u0.half_density(r));
    cmax = std::max(cmax, c);
    if (c > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(c));
    }
  }
  if (cmax > 1e-13 && lx.size() >= 2) {
    out.tail_slope = fit_line(lx, ly).slope;
    if (out.tail_slope < 0.05) out.tail_divergence = true;
  }
  return out;
}

}  // namespace specrep

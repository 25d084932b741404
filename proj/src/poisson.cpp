#include "specrep/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specrep/pairwise.hpp"
#include "specrep/quadrature.hpp"

namespace specrep {

BaseSpace::BaseSpace(double r_min, double r_max, UFunction u, int table_size)
    : r_min_(r_min), r_max_(r_max), u_(std::move(u)) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("BaseSpace: bad window");
  const double s0 = std::log(r_min), s1 = std::log(r_max);
  const int N = table_size;
  s_.resize(static_cast<std::size_t>(N) + 1);
  cdf_.resize(static_cast<std::size_t>(N) + 1);
  const double ds = (s1 - s0) / N;
  for (int i = 0; i <= N; ++i) s_[static_cast<std::size_t>(i)] = s0 + ds * i;
  cdf_[0] = 0.0;
  double prev = u_.density(std::exp(s_[0]));
  for (int i = 1; i <= N; ++i) {
    const double cur = u_.density(std::exp(s_[static_cast<std::size_t>(i)]));
    cdf_[static_cast<std::size_t>(i)] = cdf_[static_cast<std::size_t>(i - 1)] + 0.5 * (prev + cur) * ds;
    prev = cur;
  }
  lambda_ = cdf_.back();
  if (!(lambda_ > 0.0)) throw std::invalid_argument("BaseSpace: window carries no mass");
  if (lambda_ > 100.0) throw std::invalid_argument("BaseSpace: intensity mass above supported range");
}

double BaseSpace::sample_radius(Rng& rng) const {
  const double target = rng.uniform() * lambda_;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
  std::size_t hi = std::min(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double seg = cdf_[hi] - cdf_[lo];
  const double t = seg > 0.0 ? (target - cdf_[lo]) / seg : 0.5;
  return std::exp(s_[lo] + t * (s_[hi] - s_[lo]));
}

Configuration BaseSpace::sample(Rng& rng) const {
  Configuration omega;
  const int count = rng.poisson(lambda_);
  omega.points.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    PointY y;
    y.r = sample_radius(rng);
    y.x = rng.uniform();
    omega.points.push_back(y);
  }
  return omega;
}

double quasi_weight(const Configuration& omega, const UFunction& u, WeightConvention conv) {
  double s = 0.0;
  for (const auto& y : omega.points) s += u(y.r);
  return conv == WeightConvention::AsStated ? std::exp(-s) : std::exp(s);
}

McEstimate charfunc_mc(const TestFunction& f, const BaseSpace& space, WeightConvention conv,
                       long samples, std::uint64_t seed) {
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Configuration omega = space.sample(rng);
    double expo = 0.0;
    for (const auto& y : omega.points) {
      expo -= f.f(y.r, y.x);
      expo += (conv == WeightConvention::AsStated ? -space.u()(y.r) : space.u()(y.r));
    }
    const double w = std::exp(expo);
    sum += w;
    sumsq += w * w;
  }
  McEstimate out;
  out.samples = samples;
  const double N = static_cast<double>(samples);
  out.value = sum / N;
  out.stderr_est = std::sqrt(std::max(0.0, (sumsq / N - out.value * out.value) / (N - 1.0)));
  return out;
}

double charfunc_analytic(const TestFunction& f, const BaseSpace& space) {
  auto inner = [&](double r) {
    std::vector<double> cuts{0.0};
    for (double b : f.x_breaks)
      if (b > 0.0 && b < 1.0) cuts.push_back(b);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      acc += integrate_adaptive([&](double x) { return std::exp(-f.f(r, x)); }, cuts[i], cuts[i + 1],
                                1e-12);
    return acc - space.u().density(r);
  };
  const double integral = integrate_haar(inner, space.r_min(), space.r_max(), 1e-11);
  return std::exp(integral);
}

double campbell_pi_mean(const BaseSpace& space, WeightConvention conv) {
  auto integrand = [&](double r) {
    const double u = space.u()(r);
    const double pi_pt = conv == WeightConvention::AsStated ? std::exp(-u) : std::exp(u);
    return (pi_pt - 1.0) * std::exp(-u);
  };
  return std::exp(integrate_haar(integrand, space.r_min(), space.r_max(), 1e-11));
}

double ScaleCurrent::at(double x) const {
  std::size_t cell = 0;
  while (cell < breaks.size() && x >= breaks[cell]) ++cell;
  return values[cell];
}

double ScaleCurrent::log_integral() const {
  double acc = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double hi = i < breaks.size() ? breaks[i] : 1.0;
    acc += (hi - lo) * std::log(values[i]);
    lo = hi;
  }
  return acc;
}

TransportResult act_on_configuration(const ScaleCurrent& c, const Configuration& omega,
                                     const BaseSpace& space) {
  TransportResult out;
  out.config.points.reserve(omega.points.size());
  for (const auto& y : omega.points) {
    PointY z{c.at(y.x) * y.r, y.x};
    if (!space.inside(z.r)) ++out.leaked;
    out.config.points.push_back(z);
  }
  return out;
}

RadonNikodymCheck radon_nikodym_check(const ScaleCurrent& c, const BaseSpace& space,
                                      const TestFunction& g, long samples, std::uint64_t seed,
                                      double leakage_bound) {
  RadonNikodymCheck out;
  out.function_name = g.name;
  out.predicted_factor = std::exp(c.log_integral());

  // Expected mass escaping through the upper window edge, per cell.
  double leak = 0.0;
  double lo = 0.0;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    const double hi = i < c.breaks.size() ? c.breaks[i] : 1.0;
    const double ci = c.values[i];
    if (ci > 1.0) {
      const double r_from = space.r_max() / ci;
      if (r_from < space.r_max())
        leak += (hi - lo) * integrate_haar([&](double r) { return space.u().density(r); },
                                           std::max(r_from, space.r_min()), space.r_max(), 1e-12);
    } else if (ci < 1.0) {
      const double r_to = space.r_min() / ci;  // image below r_min
      if (r_to > space.r_min())
        leak += (hi - lo) * integrate_haar([&](double r) { return space.u().density(r); },
                                           space.r_min(), std::min(r_to, space.r_max()), 1e-12);
    }
    lo = hi;
  }
  out.leakage_fraction = leak / space.intensity_mass();

  // Window bias of the transported-f identity: below r_min the integrand
  // differs by u(r) - u(cr); above r_max by the intensity tails.
  double cmax = 1.0, cmin = 1.0;
  for (double v : c.values) {
    cmax = std::max(cmax, v);
    cmin = std::min(cmin, v);
  }
  const double rmin = space.r_min(), rmax = space.r_max();
  const double bottom = std::abs(space.u()(rmin) - space.u()(rmin * cmin)) +
                        std::abs(space.u()(rmin * cmax) - space.u()(rmin));
  const double far = rmax * std::max(4.0, 4.0 * cmax);
  const double top = integrate_haar([&](double r) { return space.u().density(r / cmax); }, rmax,
                                    far, 1e-13) +
                     integrate_haar([&](double r) { return space.u().density(r); }, rmax, far,
                                    1e-13);
  out.window_bias_bound = bottom + top;

  if (out.leakage_fraction > leakage_bound)
    throw std::domain_error("radon_nikodym_check: window leakage above the configured bound");

  // Paired estimates of E[Phi_f] and E[Phi_{f o r~}] with f = u + g.
  Rng rng(seed);
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (long s = 0; s < samples; ++s) {
    const Configuration omega = space.sample(rng);
    double ea = 0.0, eb = 0.0;
    for (const auto& y : omega.points) {
      const double uy = space.u()(y.r);
      const double cy = c.at(y.x);
      ea += uy - (space.u()(y.r) + g.f(y.r, y.x));          // pi * e^{-f}
      eb += uy - (space.u()(cy * y.r) + g.f(cy * y.r, y.x));  // pi * e^{-f o r~}
    }
    const double wa = std::exp(ea);
    const double wb = std::exp(eb);
    sa += wa;
    sb += wb;
    saa += wa * wa;
    sbb += wb * wb;
    sab += wa * wb;
  }
  const double N = static_cast<double>(samples);
  const double A = sa / N, B = sb / N;
  const double va = (saa / N - A * A) / (N - 1.0);
  const double vb = (sbb / N - B * B) / (N - 1.0);
  const double cab = (sab / N - A * B) / (N - 1.0);
  out.measured_factor = A / B;
  out.ratio_stderr =
      std::abs(A / B) * std::sqrt(std::max(0.0, va / (A * A) + vb / (B * B) - 2.0 * cab / (A * B)));
  out.pass = std::abs(out.measured_factor - out.predicted_factor) <=
             3.0 * out.ratio_stderr + out.window_bias_bound * std::abs(out.predicted_factor);
  return out;
}

}  // namespace specrep

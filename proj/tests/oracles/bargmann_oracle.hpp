#pragma once

// Quadrature oracle for the Bargmann-Fock inner product at n = 2 (one
// complex variable):
//   <f, g> = (1/pi) int_C f(z) conj(g(z)) e^{-|z|^2} dA(z)
//          = (1/2pi) int_0^inf int_0^{2pi} f conj(g) e^{-t} dt dtheta,
// t = |z|^2. Trapezoid in theta (exact for trigonometric polynomials),
// panelled Gauss-Legendre in t.

#include <complex>
#include <functional>

#include "oracles/quad_oracle.hpp"

namespace oracle {

using cfun = std::function<std::complex<double>(std::complex<double>)>;

inline std::complex<double> bargmann_inner(const cfun& f, const cfun& g, int n_theta = 128,
                                           double t_max = 80.0) {
  auto radial = [&](double t) {
    const double rho = std::sqrt(t);
    std::complex<double> acc{0.0, 0.0};
    for (int k = 0; k < n_theta; ++k) {
      const double th = 2.0 * 3.14159265358979323846 * k / n_theta;
      const std::complex<double> z = rho * std::complex<double>(std::cos(th), std::sin(th));
      acc += f(z) * std::conj(g(z));
    }
    return acc / static_cast<double>(n_theta) * std::exp(-t);
  };
  const double re = integrate([&](double t) { return radial(t).real(); }, 0.0, t_max, 1e-13);
  const double im = integrate([&](double t) { return radial(t).imag(); }, 0.0, t_max, 1e-13);
  return {re, im};
}

}  // namespace oracle

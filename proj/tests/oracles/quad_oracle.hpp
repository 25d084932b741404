#pragma once

// Composite 16-point Gauss-Legendre with panel doubling until two
// consecutive refinements agree. Independent of the library's adaptive
// Simpson path; used wherever a spec example calls for a quadrature oracle.

#include <cmath>
#include <functional>

namespace oracle {

inline double gauss16(const std::function<double(double)>& f, double a, double b) {
  static const double xs[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double ws[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += ws[i] * (f(c - h * xs[i]) + f(c + h * xs[i]));
  return s * h;
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  double prev = gauss16(f, a, b);
  for (int panels = 2; panels <= 16384; panels *= 2) {
    double cur = 0.0;
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) cur += gauss16(f, a + i * h, a + (i + 1) * h);
    if (std::abs(cur - prev) < tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

// Integral against d*r = dr/r via s = log r.
inline double integrate_haar(const std::function<double(double)>& f, double r_min, double r_max,
                             double tol = 1e-12) {
  return integrate([&](double s) { return f(std::exp(s)); }, std::log(r_min), std::log(r_max), tol);
}

}  // namespace oracle

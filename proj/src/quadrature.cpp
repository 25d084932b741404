#include "specrep/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace specrep {

namespace {

double simpson(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double b, double fa, double fm,
             double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          int max_depth) {
  if (!(b > a)) return 0.0;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  return adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double integrate_haar(const std::function<double(double)>& f, double r_min, double r_max,
                      double tol) {
  if (!(r_min > 0.0) || !(r_max > r_min))
    throw std::invalid_argument("integrate_haar: need 0 < r_min < r_max");
  auto g = [&f](double s) { return f(std::exp(s)); };
  return integrate_adaptive(g, std::log(r_min), std::log(r_max), tol);
}

FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>* sigma) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching inputs with >= 2 points");
  const std::size_t n = x.size();
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sigma ? 1.0 / ((*sigma)[i] * (*sigma)[i]) : 1.0;
    sw += w;
    swx += w * x[i];
    swy += w * y[i];
    swxx += w * x[i] * x[i];
    swxy += w * x[i] * y[i];
  }
  const double det = sw * swxx - swx * swx;
  FitResult r;
  r.slope = (sw * swxy - swx * swy) / det;
  r.intercept = (swxx * swy - swx * swxy) / det;
  if (sigma) {
    r.slope_stderr = std::sqrt(sw / det);
  } else {
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (r.intercept + r.slope * x[i]);
      ss += e * e;
    }
    const double var = ss / static_cast<double>(n > 2 ? n - 2 : 1);
    r.slope_stderr = std::sqrt(var * sw / det);
  }
  return r;
}

}  // namespace specrep

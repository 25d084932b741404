#pragma once

#include <functional>

namespace specrep {

// Adaptive Simpson with absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-12, int max_depth = 48);

// Integrates f(r) against d*r = dr/r over [r_min, r_max] by substituting
// s = log r and running adaptive Simpson in s.
double integrate_haar(const std::function<double(double)>& f, double r_min, double r_max,
                      double tol = 1e-12);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y ~ intercept + slope * x; optional per-point
// standard deviations switch to weighted least squares.
FitResult fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>* sigma = nullptr);

}  // namespace specrep

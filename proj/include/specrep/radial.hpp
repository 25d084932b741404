#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace specrep {

// Logarithmically equispaced nodes on [r_min, r_max] with uniform weights
// h = log(ratio) per node, so that sums approximate integrals against the
// Haar measure d*r = dr/r and index shifts are exact isometries up to
// boundary truncation.
class RadialGrid {
 public:
  RadialGrid(double r_min, double r_max, int nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double weight(int) const { return h_; }
  double log_step() const { return h_; }
  double ratio() const { return ratio_; }
  const std::vector<double>& nodes() const { return nodes_; }

  // Quadrature of f against d*r over the grid window.
  double integrate(const std::function<double(double)>& f) const;

  static RadialGrid default_grid() { return RadialGrid(std::exp(-6.0), std::exp(3.0), 96); }

 private:
  std::vector<double> nodes_;
  double h_;
  double ratio_;
};

// A smooth nonnegative u on the half-line; e^{-u/2} weights cocycle
// sections, e^{-u} is the Poisson intensity density against d*r.
class UFunction {
 public:
  // terms: sum of c * r^p with c, p > 0 (so u(0) = 0 and u >= 0).
  static UFunction quadratic() { return UFunction({{2.0, 2.0}}, "quadratic"); }
  static UFunction linear() { return UFunction({{1.0, 1.0}}, "linear"); }
  static UFunction power(double c, double p, std::string name = "") {
    return UFunction({{c, p}}, name.empty() ? "power" : std::move(name));
  }
  static UFunction constant_one() { return UFunction({}, "one", 1.0); }
  // Parses "c1*r^p1+c2*r^p2+..." (whitespace-free), e.g. "0.5*r^1+2*r^2".
  static UFunction parse(const std::string& expr);

  double operator()(double r) const {
    double u = offset_;
    for (const auto& [c, p] : terms_) u += c * std::pow(r, p);
    return u;
  }
  double half_density(double r) const { return std::exp(-0.5 * (*this)(r)); }
  double density(double r) const { return std::exp(-(*this)(r)); }
  const std::string& name() const { return name_; }
  bool vanishes_at_zero() const { return offset_ == 0.0; }

 private:
  UFunction(std::vector<std::pair<double, double>> terms, std::string name, double offset = 0.0)
      : terms_(std::move(terms)), name_(std::move(name)), offset_(offset) {}
  std::vector<std::pair<double, double>> terms_;
  std::string name_;
  double offset_ = 0.0;
};

struct RadialMeasure {
  RadialGrid grid;
  UFunction u;
};

}  // namespace specrep

#include "specrep/radial.hpp"

#include <cmath>
#include <stdexcept>

#include "specrep/pairwise.hpp"

namespace specrep {

RadialGrid::RadialGrid(double r_min, double r_max, int nodes) {
  if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("RadialGrid: need 0 < r_min < r_max");
  if (nodes < 2) throw std::invalid_argument("RadialGrid: need at least 2 nodes");
  const double s0 = std::log(r_min);
  const double s1 = std::log(r_max);
  h_ = (s1 - s0) / static_cast<double>(nodes - 1);
  ratio_ = std::exp(h_);
  nodes_.resize(static_cast<std::size_t>(nodes));
  for (int i = 0; i < nodes; ++i) nodes_[static_cast<std::size_t>(i)] = std::exp(s0 + h_ * i);
}

double RadialGrid::integrate(const std::function<double(double)>& f) const {
  std::vector<double> vals(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) vals[i] = f(nodes_[i]) * h_;
  return pairwise_sum(vals);
}

UFunction UFunction::parse(const std::string& expr) {
  std::vector<std::pair<double, double>> terms;
  std::size_t pos = 0;
  while (pos < expr.size()) {
    std::size_t next = expr.find('+', pos);
    if (next == std::string::npos) next = expr.size();
    const std::string term = expr.substr(pos, next - pos);
    const std::size_t star = term.find("*r^");
    if (star == std::string::npos)
      throw std::invalid_argument("UFunction: term '" + term + "' is not of the form c*r^p");
    const double c = std::stod(term.substr(0, star));
    const double p = std::stod(term.substr(star + 3));
    if (!(c > 0.0) || !(p > 0.0))
      throw std::invalid_argument("UFunction: coefficients and powers must be positive");
    terms.emplace_back(c, p);
    pos = next + 1;
  }
  if (terms.empty()) throw std::invalid_argument("UFunction: empty expression");
  return UFunction(std::move(terms), "custom:" + expr);
}

}  // namespace specrep

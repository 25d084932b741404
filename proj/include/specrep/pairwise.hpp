#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace specrep {

// Pairwise (cascade) summation. All grid sums in the library go through
// this so that results are independent of how callers batch their work.
inline double pairwise_sum(std::span<const double> xs) {
  const std::size_t n = xs.size();
  if (n <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& xs) {
  return pairwise_sum(std::span<const double>(xs));
}

inline std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) {
  const std::size_t n = xs.size();
  if (n <= 8) {
    std::complex<double> s{0.0, 0.0};
    for (const auto& x : xs) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

inline std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& xs) {
  return pairwise_sum(std::span<const std::complex<double>>(xs));
}

}  // namespace specrep

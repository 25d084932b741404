#pragma once

// Truncated free associative algebra on two generators, used as an
// independent oracle for the Dynkin coefficient table: exp(a) exp(b) must
// equal exp(Z(a,b)) word-by-word when all brackets are expanded as
// xy - yx. Mirrors the classic series cross-check.

#include <cstdint>
#include <map>
#include <vector>

namespace oracle {

using Word = std::vector<std::uint8_t>;

struct FreeSeries {
  int max_len;
  std::map<Word, double> coeff;

  static FreeSeries zero(int max_len) { return {max_len, {}}; }
  static FreeSeries generator(int max_len, std::uint8_t letter) {
    FreeSeries s{max_len, {}};
    s.coeff[{letter}] = 1.0;
    return s;
  }

  FreeSeries operator+(const FreeSeries& o) const {
    FreeSeries r = *this;
    for (const auto& [w, c] : o.coeff) r.coeff[w] += c;
    return r;
  }
  FreeSeries operator-(const FreeSeries& o) const {
    FreeSeries r = *this;
    for (const auto& [w, c] : o.coeff) r.coeff[w] -= c;
    return r;
  }
  FreeSeries operator*(double s) const {
    FreeSeries r = *this;
    for (auto& [w, c] : r.coeff) c *= s;
    return r;
  }
  FreeSeries operator*(const FreeSeries& o) const {
    FreeSeries r = zero(max_len);
    for (const auto& [w1, c1] : coeff) {
      for (const auto& [w2, c2] : o.coeff) {
        if (static_cast<int>(w1.size() + w2.size()) > max_len) continue;
        Word w = w1;
        w.insert(w.end(), w2.begin(), w2.end());
        r.coeff[w] += c1 * c2;
      }
    }
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [w, c] : coeff) m = std::max(m, std::abs(c));
    return m;
  }
};

inline FreeSeries commutator(const FreeSeries& a, const FreeSeries& b) {
  return a * b - b * a;
}

// exp with the constant term kept implicit: returns 1 + x + x^2/2 + ...
// with the empty word standing for 1.
inline FreeSeries exp_series(const FreeSeries& x) {
  FreeSeries r = FreeSeries::zero(x.max_len);
  r.coeff[{}] = 1.0;
  FreeSeries term = r;
  for (int k = 1; k <= x.max_len; ++k) {
    term = term * x * (1.0 / k);
    r = r + term;
  }
  return r;
}

}  // namespace oracle

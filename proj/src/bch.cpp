#include "specrep/bch.hpp"

#include <array>
#include <map>
#include <stdexcept>

namespace specrep {

namespace {

std::int64_t factorial(int k) {
  std::int64_t f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Enumerates the blocks (r_1,s_1),...,(r_n,s_n), r_i+s_i >= 1, of total
// letter count <= depth, accumulating
//   (-1)^{n-1} / (n * (r_1+s_1+...+r_n+s_n) * prod r_i! s_i!)
// on the word A^{r_1} B^{s_1} ... A^{r_n} B^{s_n}.
void enumerate(int depth, int blocks_used, int letters_used,
               std::vector<std::uint8_t>& word,
               std::map<std::vector<std::uint8_t>, Rational>& acc,
               Rational factorial_prod) {
  if (blocks_used >= 1 && !word.empty()) {
    const int n = blocks_used;
    const int m = letters_used;
    Rational coeff = Rational(((n - 1) % 2 == 0) ? 1 : -1, static_cast<std::int64_t>(n) * m);
    coeff = coeff * factorial_prod;
    acc[word] += coeff;
  }
  if (letters_used >= depth) return;
  // Append one more block (r, s).
  for (int r = 0; r + letters_used <= depth; ++r) {
    for (int s = (r == 0 ? 1 : 0); r + s + letters_used <= depth; ++s) {
      for (int i = 0; i < r; ++i) word.push_back(0);
      for (int i = 0; i < s; ++i) word.push_back(1);
      Rational fp = factorial_prod * Rational(1, factorial(r) * factorial(s));
      enumerate(depth, blocks_used + 1, letters_used + r + s, word, acc, fp);
      word.resize(word.size() - static_cast<std::size_t>(r + s));
    }
  }
}

std::vector<BchWord> build(int depth) {
  std::map<std::vector<std::uint8_t>, Rational> acc;
  std::vector<std::uint8_t> word;
  enumerate(depth, 0, 0, word, acc, Rational(1));

  // Fold the antisymmetric length-2 pair into a single word so the class-2
  // engine evaluates exactly (a + b) + ([a,b]/2) with one bracket call.
  const std::vector<std::uint8_t> ab{0, 1};
  const std::vector<std::uint8_t> ba{1, 0};
  if (acc.count(ab) && acc.count(ba)) {
    acc[ab] = acc[ab] - acc[ba];
    acc.erase(ba);
  }

  std::vector<BchWord> out;
  for (auto& [w, c] : acc) {
    if (c.num == 0) continue;
    // Right-nested evaluation starts with [w_{m-1}, w_m]; equal innermost
    // letters give a vanishing bracket.
    if (w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2]) continue;
    BchWord t;
    t.letters = w;
    t.coeff_exact = c;
    t.coeff = c.to_double();
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

const std::vector<BchWord>& bch_words(int depth) {
  if (depth < 1 || depth > kBchMaxDepth)
    throw std::invalid_argument("bch_words: depth must be in [1, 5]");
  static const std::array<std::vector<BchWord>, kBchMaxDepth> tables = {
      build(1), build(2), build(3), build(4), build(5)};
  return tables[static_cast<std::size_t>(depth - 1)];
}

}  // namespace specrep

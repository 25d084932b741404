#pragma once

#include <cstdint>
#include <vector>

#include "specrep/rational.hpp"

namespace specrep {

// One aggregated term of the Dynkin series: a two-letter word over {A, B}
// evaluated as the right-nested bracket [w_1,[w_2,[...,[w_{m-1},w_m]...]]].
struct BchWord {
  std::vector<std::uint8_t> letters;  // 0 = first argument, 1 = second
  Rational coeff_exact;
  double coeff = 0.0;
};

inline constexpr int kBchMaxDepth = 5;

// Dynkin coefficient table, aggregated per word, for word lengths 1..depth.
// Words whose two innermost letters coincide evaluate to zero and are dropped.
const std::vector<BchWord>& bch_words(int depth);

}  // namespace specrep

#pragma once

// Seeded random words and chains for the randomized suites.

#include <random>

#include "loopchern/chain.hpp"

namespace loopchern {

struct RandomWordSpec {
  int n = 2;
  int min_length = 0;  // N
  int max_length = 3;
  int mode_box = 1;
  /// Modes summing to zero (the only sector the current sees) with theta_0 in the prime part.
  bool zero_total = true;
};

Word random_word(std::mt19937_64& rng, const RandomWordSpec& spec);

/// 1..max_words random words with complex coefficients of modulus in [1/2, 2].
Chain<Complex> random_chain(std::mt19937_64& rng, const RandomWordSpec& spec, int max_words = 3);

}  // namespace loopchern

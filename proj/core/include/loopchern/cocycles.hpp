#pragma once

// Exact kernel of the total differential on a truncated chain space.

#include <cstdint>
#include <vector>

#include "loopchern/chain.hpp"

namespace loopchern {

enum class Parity { even, odd, both };

struct CocycleTruncation {
  int n = 2;
  int max_length = 2;  // N_max: words theta_0 (x) ... (x) theta_N with N <= N_max
  int mode_box = 0;    // |m|_inf <= mode_box in every slot
  Parity parity = Parity::even;
  /// Restrict to words whose Fourier modes sum to zero. delta preserves the
  /// total mode and the current vanishes off this sector.
  bool zero_total_mode = true;
  /// Cap on the number of nonzero matrix entries of delta on the domain.
  std::uint64_t budget = 5'000'000;
};

struct CocycleBasis {
  std::vector<Chain<GaussQ>> cocycles;
  std::size_t domain_dim = 0;
  std::size_t image_words = 0;  // distinct words met by delta(domain)
  std::size_t rank = 0;
  int image_max_length = 0;     // every image word has length <= this (no row truncation)
};

/// Basis words of the truncation, in canonical order.
std::vector<Word> truncation_words(const CocycleTruncation& t);

/// Basis of ker(delta) on the truncation; every returned chain is re-checked
/// to satisfy delta(c) = 0 exactly.
CocycleBasis solve_cocycles(const CocycleTruncation& t);

}  // namespace loopchern

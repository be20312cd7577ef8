#pragma once

// Exhaustive exact check of the chain-complex identities on a truncation:
// every basis word of length <= N_max + 1 with modes in [-mode_box, mode_box]^n
// and all form degrees.

#include <array>
#include <cstdint>
#include <string>

#include "loopchern/chain.hpp"
#include "loopchern/chain_json.hpp"

namespace loopchern {

enum class Identity : int { delta_sq = 0, d_sq, b_sq, B_sq, bB, Db, DB };
inline constexpr int kIdentityCount = 7;

const char* identity_name(Identity id);

struct IdentityResult {
  std::uint64_t words_checked = 0;
  std::uint64_t failures = 0;
  std::string first_violation;  // empty if none
};

struct AlgebraSuiteResult {
  int n = 0;
  int max_length = 0;
  int mode_box = 0;
  std::uint64_t basis_size = 0;  // basis elements per slot
  std::uint64_t words = 0;
  std::array<IdentityResult, kIdentityCount> identities{};
  bool all_pass() const {
    for (const auto& r : identities)
      if (r.failures) return false;
    return true;
  }
};

/// Throws ResourceError if the number of words exceeds word_budget.
AlgebraSuiteResult verify_algebra_exhaustive(int n, int max_length, int mode_box, const SignConventions& conv = {},
                                             std::uint64_t word_budget = 100'000'000);

/// Number of basis elements with modes in the box (both parts, all index sets).
std::vector<BasisElem> basis_elements(int n, int mode_box);


}  // namespace loopchern

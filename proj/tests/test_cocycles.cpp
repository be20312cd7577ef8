#include <algorithm>
#include <map>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "loopchern/cocycles.hpp"
#include "loopchern/errors.hpp"

using namespace loopchern;

namespace {

// Floating-point rank of delta on the truncation words, from a dense SVD.
std::size_t float_rank(const std::vector<Word>& words, int n) {
  std::map<std::vector<std::uint64_t>, int> rows;
  std::vector<std::vector<std::pair<int, Complex>>> cols;
  auto key = [](const Word& w) {
    std::vector<std::uint64_t> k;
    for (const auto& e : w) k.push_back(e.mode_bits() * 512 + e.mask * 2 + static_cast<int>(e.part));
    return k;
  };
  for (const auto& w : words) {
    const auto img = total_differential(Chain<GaussQ>::from_word(n, w));
    std::vector<std::pair<int, Complex>> col;
    for (const auto& t : img.terms()) {
      auto [it, ins] = rows.try_emplace(key(t.word), static_cast<int>(rows.size()));
      col.push_back({it->second, t.coeff.to_complex()});
    }
    cols.push_back(std::move(col));
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, c] : cols[j]) m(i, static_cast<Eigen::Index>(j)) += c;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  svd.setThreshold(1e-10);
  return static_cast<std::size_t>(svd.rank());
}

}  // namespace

class CocycleTruncations : public ::testing::TestWithParam<std::tuple<int, int, Parity>> {};

TEST_P(CocycleTruncations, KernelMatchesIndependentRank) {
  CocycleTruncation t;
  std::tie(t.max_length, t.mode_box, t.parity) = GetParam();
  const auto words = truncation_words(t);
  const auto basis = solve_cocycles(t);
  EXPECT_EQ(basis.domain_dim, words.size());
  const std::size_t r = float_rank(words, t.n);
  EXPECT_EQ(basis.rank, r);
  EXPECT_EQ(basis.cocycles.size(), words.size() - r);
  for (const auto& c : basis.cocycles) {
    EXPECT_TRUE(total_differential(c).is_zero());
    // Homogeneous in parity (not necessarily in degree).
    for (const auto& term : c.terms()) {
      const int d = word_degree(term.word);
      if (t.parity == Parity::even) EXPECT_EQ(d % 2, 0);
      if (t.parity == Parity::odd) EXPECT_NE(d % 2, 0);
    }
  }
  // The returned cocycles are linearly independent.
  if (!basis.cocycles.empty()) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(words.size()),
                                                static_cast<Eigen::Index>(basis.cocycles.size()));
    for (std::size_t j = 0; j < basis.cocycles.size(); ++j)
      for (const auto& term : basis.cocycles[j].terms()) {
        const auto it = std::find(words.begin(), words.end(), term.word);
        ASSERT_NE(it, words.end());
        m(it - words.begin(), static_cast<Eigen::Index>(j)) = term.coeff.to_complex();
      }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    svd.setThreshold(1e-10);
    EXPECT_EQ(static_cast<std::size_t>(svd.rank()), basis.cocycles.size());
  }
}

INSTANTIATE_TEST_SUITE_P(Small, CocycleTruncations,
                         ::testing::Values(std::make_tuple(1, 0, Parity::both), std::make_tuple(2, 0, Parity::even),
                                           std::make_tuple(2, 0, Parity::odd), std::make_tuple(1, 1, Parity::even)));

TEST(Cocycles, WordsRespectTheTruncation) {
  CocycleTruncation t;
  t.max_length = 2;
  t.mode_box = 1;
  t.parity = Parity::both;
  for (const auto& w : truncation_words(t)) {
    EXPECT_LE(word_length(w), 2);
    EXPECT_FALSE(has_unit_tail(w));
    std::array<int, kMaxDimension> total{};
    for (const auto& e : w)
      for (int k = 0; k < kMaxDimension; ++k) {
        EXPECT_LE(std::abs(e.mode[k]), 1);
        total[k] += e.mode[k];
      }
    for (int k : total) EXPECT_EQ(k, 0);
  }
}

TEST(Cocycles, UnitIsACocycle) {
  CocycleTruncation t;
  t.max_length = 0;
  const auto basis = solve_cocycles(t);
  bool found = false;
  for (const auto& c : basis.cocycles)
    if (c.size() == 1 && c.terms()[0].word.size() == 1 && c.terms()[0].word[0].is_unit()) found = true;
  EXPECT_TRUE(found);
}

TEST(Cocycles, BudgetEnforced) {
  CocycleTruncation t;
  t.max_length = 2;
  t.mode_box = 1;
  t.budget = 100;
  EXPECT_THROW(solve_cocycles(t), ResourceError);
}

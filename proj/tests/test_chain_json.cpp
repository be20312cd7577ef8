#include <numbers>

#include <gtest/gtest.h>

#include "loopchern/chain_json.hpp"
#include "loopchern/errors.hpp"

using namespace loopchern;
using nlohmann::json;

namespace {

json term(std::vector<int> mode, std::vector<int> idx, json re, json im = 0) {
  return {{"mode", mode}, {"indices", idx}, {"re", re}, {"im", im}};
}

}  // namespace

TEST(ChainJson, IndicesAreOneBased) {
  const json j = json::array({json::array({json{{"prime", json::array({term({0, 0}, {2, 1}, 1)})}}})});
  const auto c = chain_from_json(j, 2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.terms()[0].word[0].mask, 0b11);
  EXPECT_EQ(c.terms()[0].coeff, Complex(-1.0));  // dx2 ^ dx1 = -dx1 ^ dx2
  const json bad = json::array({json::array({json{{"prime", json::array({term({0, 0}, {0}, 1)})}}})});
  EXPECT_THROW(chain_from_json(bad, 2), std::exception);
}

TEST(ChainJson, ExactReaderAcceptsRationalsAndRejectsDecimals) {
  const json j = json::array({json::array({json{{"prime", json::array({term({1, -1}, {1}, "3/4", "-1/2")})}}})});
  const auto c = exact_chain_from_json(j, 2);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.terms()[0].coeff, GaussQ(mpq_class(3, 4), mpq_class(-1, 2)));
  const json dec = json::array({json::array({json{{"prime", json::array({term({0, 0}, {}, 0.5)})}}})});
  EXPECT_THROW(exact_chain_from_json(dec, 2), std::exception);
  EXPECT_NO_THROW(chain_from_json(dec, 2));
}

TEST(ChainJson, MultilinearExpansionOfSlots) {
  // (1 + dx1) (x) (vartheta + vartheta dx2): the tail slot expands to two words, the head to two.
  const json slot0 = {{"prime", json::array({term({0, 0}, {}, 1), term({0, 0}, {1}, 1)})}};
  const json slot1 = {{"dblprime", json::array({term({0, 0}, {}, 1), term({0, 0}, {2}, 1)})}};
  const auto c = chain_from_json(json::array({json::array({slot0, slot1})}), 2);
  EXPECT_EQ(c.size(), 4u);
}

TEST(ChainJson, RoundTrip) {
  const json j = json::array({json::array({json{{"prime", json::array({term({1, 0}, {1}, "2")})}},
                                           json{{"dblprime", json::array({term({-1, 0}, {2}, "-1/3", "1")})}}})});
  const auto c = exact_chain_from_json(j, 2);
  EXPECT_EQ(exact_chain_from_json(chain_to_json(c), 2), c);
  const auto f = to_float(c);
  const auto back = chain_from_json(chain_to_json(f), 2);
  ASSERT_EQ(back.size(), f.size());
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LT(std::abs(back.terms()[i].coeff - f.terms()[i].coeff), 1e-12);
}

TEST(ChainJson, MalformedInputRejected) {
  EXPECT_THROW(chain_from_json(json::object(), 2), std::exception);
  const json wrong_mode = json::array({json::array({json{{"prime", json::array({term({0}, {}, 1)})}}})});
  EXPECT_THROW(chain_from_json(wrong_mode, 2), std::exception);
  const json extra = json::array({json::array({json{{"prime", json::array()}, {"bogus", 1}}})});
  EXPECT_THROW(chain_from_json(extra, 2), std::exception);
}

TEST(ChainJson, DescribeIsSingleLine) {
  const json j = json::array({json::array({json{{"prime", json::array({term({0, 0}, {1, 2}, 1)})}}})});
  const auto c = chain_from_json(j, 2);
  const std::string s = describe(c.terms()[0].word, 2);
  EXPECT_EQ(s.find('\n'), std::string::npos);
  EXPECT_FALSE(s.empty());
}

#include <gtest/gtest.h>

#include <random>

#include "flakyfix/edit_distance.hpp"
#include "oracles.hpp"

using namespace flakyfix;

namespace {

std::vector<std::string> random_tokens(std::mt19937_64& rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", "(", ")", ";"};
  std::uniform_int_distribution<std::size_t> len(0, 8), pick(0, alphabet.size() - 1);
  std::vector<std::string> out(len(rng));
  for (auto& t : out) t = alphabet[pick(rng)];
  return out;
}

}  // namespace

TEST(EditDistance, KnownPairs) {
  using V = std::vector<std::string>;
  EXPECT_EQ(levenshtein(V{}, V{}), 0u);
  EXPECT_EQ(levenshtein(V{"a", "b", "c"}, V{}), 3u);
  EXPECT_EQ(levenshtein(V{"k", "i", "t", "t", "e", "n"}, V{"s", "i", "t", "t", "i", "n", "g"}), 3u);
}

TEST(EditDistance, MatchesRecursiveOracleOnRandomPairs) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_tokens(rng), b = random_tokens(rng);
    EXPECT_EQ(levenshtein(a, b), oracle::edit_distance(a, 0, b, 0));
  }
}

TEST(EditDistance, MetricAxioms) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_tokens(rng), b = random_tokens(rng), c = random_tokens(rng);
    EXPECT_EQ(levenshtein(a, a), 0u);
    EXPECT_EQ(levenshtein(a, b), levenshtein(b, a));
    EXPECT_EQ(levenshtein(a, b) == 0, a == b);
    EXPECT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST(EditDistance, PercentChanged) {
  const auto e = token_edit_distance("x = f(1);", "x = g(1);");
  EXPECT_EQ(e.distance, 1u);
  ASSERT_TRUE(e.pct_changed);
  EXPECT_DOUBLE_EQ(*e.pct_changed, 1.0 / 7.0);
  EXPECT_TRUE(token_edit_distance("x;", "").pct_undefined());
  const auto both_empty = token_edit_distance("", "// only a comment");
  EXPECT_EQ(both_empty.distance, 0u);
  ASSERT_TRUE(both_empty.pct_changed);
  EXPECT_DOUBLE_EQ(*both_empty.pct_changed, 0.0);
}

TEST(EditDistance, UsesJavaTokens) {
  EXPECT_EQ(token_edit_distance("a+b", "a + b").distance, 0u);
  EXPECT_EQ(token_edit_distance("\"a b\"", "\"a  b\"").distance, 1u);
}

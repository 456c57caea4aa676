#include <gtest/gtest.h>

#include "flakyfix/bleu.hpp"
#include "flakyfix/codebleu.hpp"
#include "flakyfix/dataflow.hpp"
#include "flakyfix/error.hpp"
#include "oracles.hpp"

using namespace flakyfix;

namespace {

const std::pair<std::string, std::string> kPairs[] = {
    {"int a = b + 1;", "int a = b + 2;"},
    {"@Test public void t() { Map<String, Integer> m = new LinkedHashMap<>(); m.put(\"a\", 1); assertEquals(1, m.size()); }",
     "@Test public void t() { Map<String, Integer> m = new HashMap<>(); m.put(\"a\", 1); assertEquals(1, m.size()); }"},
    {"void f() { for (int i = 0; i < n; i++) { if (x[i] > 0) return; } }",
     "void f() { int i = 0; while (i < n) { i++; } }"},
    {"return x;", "public static void main(String[] args) { System.out.println(args.length); }"},
    {"try { a(); } catch (Exception e) { }", "try { a(); } catch (IOException e) { fail(); } finally { b(); }"},
    {"x", "y"},
};

}  // namespace

TEST(Bleu, MatchesOracleOnFixtures) {
  for (const auto& [c, r] : kPairs) {
    EXPECT_NEAR(sentence_bleu(c, r), oracle::bleu(oracle::texts(c), oracle::texts(r)), 1e-12) << c;
  }
}

TEST(Bleu, HandComputedShortPair) {
  // "int a = b + 1 ;" vs "int a = b + 2 ;": 6/7 unigrams, 4/6 bigrams,
  // 3/5 trigrams, 2/4 fourgrams, equal lengths.
  const double expected = std::pow(6.0 / 7 * 4.0 / 6 * 3.0 / 5 * 2.0 / 4, 0.25);
  EXPECT_NEAR(sentence_bleu(kPairs[0].first, kPairs[0].second), expected, 1e-12);
}

TEST(Bleu, IdenticalCodeIsOne) {
  for (const auto& [c, r] : kPairs) EXPECT_NEAR(sentence_bleu(r, r), 1.0, 1e-9);
}

TEST(Bleu, SmoothingWhenAnOrderHasNoMatch) {
  // "a b c d" vs "a c b d": 4/4 unigrams, 0/3 bigrams, so orders 2..4 use
  // (0+1)/(3+1), (0+1)/(2+1), (0+1)/(1+1).
  const double expected = std::pow(1.0 * 1.0 / 4 * 1.0 / 3 * 1.0 / 2, 0.25);
  EXPECT_NEAR(bleu(Tokens{"a", "b", "c", "d"}, {Tokens{"a", "c", "b", "d"}}), expected, 1e-12);
}

TEST(Bleu, BrevityPenalty) {
  const Tokens ref = {"a", "b", "c", "d", "e", "f", "g", "h"};
  const Tokens cand = {"a", "b", "c", "d"};
  EXPECT_NEAR(bleu(cand, {ref}), std::exp(1.0 - 8.0 / 4.0), 1e-12);
}

TEST(Bleu, ClosestReferenceLength) {
  EXPECT_EQ(closest_reference_length(5, {Tokens(3), Tokens(7)}), 3u);
  EXPECT_EQ(closest_reference_length(5, {Tokens(9), Tokens(6)}), 6u);
}

TEST(Bleu, EmptyCandidateIsAnError) {
  EXPECT_THROW(sentence_bleu("// nothing", "x;"), Error);
  EXPECT_THROW(corpus_bleu({}), Error);
}

TEST(Bleu, CorpusPoolsCounts) {
  const std::vector<std::pair<std::string, std::string>> pairs(std::begin(kPairs), std::end(kPairs));
  NgramCounts pooled;
  for (const auto& [c, r] : pairs) pooled += ngram_counts(oracle::texts(c), {oracle::texts(r)});
  EXPECT_DOUBLE_EQ(corpus_bleu(pairs), bleu_from_counts(pooled));
}

TEST(WeightedNgram, MatchesOracleOnFixtures) {
  for (const auto& [c, r] : kPairs) {
    EXPECT_NEAR(weighted_ngram_match(tokenize_java(c), tokenize_java(r)),
                oracle::bleu(oracle::texts(c), oracle::texts(r), 5.0), 1e-12)
        << c;
  }
}

TEST(WeightedNgram, KeywordMismatchCostsMore) {
  // Unigrams only: the missed keyword weighs 5 of 12, the missed name 1 of 12.
  const double kw = weighted_ngram_match(tokenize_java("while (a) b();"), tokenize_java("if (a) b();"), 5.0, 1);
  const double id = weighted_ngram_match(tokenize_java("if (c) b();"), tokenize_java("if (a) b();"), 5.0, 1);
  EXPECT_NEAR(kw, 7.0 / 12, 1e-12);
  EXPECT_NEAR(id, 11.0 / 12, 1e-12);
}

TEST(CodeBleu, CompositeAgreesWithComponentOracles) {
  for (const auto& [c, r] : kPairs) {
    const auto rep = codebleu(c, r);
    const double b = oracle::bleu(oracle::texts(c), oracle::texts(r));
    const double w = oracle::bleu(oracle::texts(c), oracle::texts(r), 5.0);
    const double a = oracle::ast_match(parse_java_subset(c).root, parse_java_subset(r).root);
    std::set<oracle::EdgeKey> ck, rk;
    for (const auto& e : extract_dataflow(c).edges) ck.insert(e.key());
    for (const auto& e : extract_dataflow(r).edges) rk.insert(e.key());
    const double d = oracle::dataflow_match(ck, rk);
    EXPECT_NEAR(rep.bleu, b, 1e-12);
    EXPECT_NEAR(rep.weighted_bleu, w, 1e-12);
    EXPECT_NEAR(rep.ast_match, a, 1e-12);
    EXPECT_NEAR(rep.dataflow_match, d, 1e-12);
    EXPECT_NEAR(rep.composite, 0.25 * (b + w + a + d), 1e-12) << c;
    EXPECT_EQ(rep.dataflow_reference_empty, rk.empty());
  }
}

TEST(CodeBleu, IdenticalCodeIsOne) {
  for (const auto& [c, r] : kPairs) EXPECT_NEAR(codebleu(r, r).composite, 1.0, 1e-9) << r;
}

TEST(CodeBleu, CustomWeights) {
  CodeBleuOptions o;
  o.weights = {0.1, 0.2, 0.3, 0.4};
  const auto rep = codebleu(kPairs[2].first, kPairs[2].second, o);
  EXPECT_NEAR(rep.composite,
              0.1 * rep.bleu + 0.2 * rep.weighted_bleu + 0.3 * rep.ast_match + 0.4 * rep.dataflow_match, 1e-12);
}

TEST(CodeBleu, RejectsBadWeights) {
  EXPECT_THROW(validate_weights({0.5, 0.5, 0.5, 0.5}), Error);
  EXPECT_THROW(validate_weights({1.5, -0.5, 0, 0}), Error);
  EXPECT_NO_THROW(validate_weights({1, 0, 0, 0}));
  CodeBleuOptions o;
  o.weights = {0.3, 0.3, 0.3, 0.3};
  EXPECT_THROW(codebleu("x;", "x;", o), Error);
  EXPECT_THROW(codebleu("", "x;"), Error);
}

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flakyfix/java_lexer.hpp"

namespace flakyfix {

using Tokens = std::vector<std::string>;

// Clipped n-gram counts for orders 1..max_n plus the lengths entering the
// brevity penalty. Counts are real so the keyword-weighted variant can share
// the aggregation.
struct NgramCounts {
  std::vector<double> matched;
  std::vector<double> total;
  std::size_t candidate_length = 0;
  std::size_t reference_length = 0;

  NgramCounts& operator+=(const NgramCounts& other);
};

/// Reference length closest to `candidate_length`; ties go to the shorter.
std::size_t closest_reference_length(std::size_t candidate_length,
                                     const std::vector<Tokens>& references);

NgramCounts ngram_counts(const Tokens& candidate, const std::vector<Tokens>& references,
                         int max_n = 4);

/// Each n-gram counts with the weight of its first token: `keyword_weight`
/// for Java keywords, 1 otherwise.
NgramCounts weighted_ngram_counts(const Tokens& candidate, const Tokens& reference,
                                  double keyword_weight, int max_n = 4);

/// Geometric mean of the precisions times the brevity penalty. When any order
/// has no match, orders n >= 2 use (matched + 1) / (total + 1). A zero
/// unigram precision yields 0.
double bleu_from_counts(const NgramCounts& counts);

/// Throws flakyfix::Error on an empty candidate.
double bleu(const Tokens& candidate, const std::vector<Tokens>& references, int max_n = 4);
double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references, int max_n = 4);

/// Code-level helpers: both sides go through tokenize_java.
double sentence_bleu(std::string_view candidate_code, std::string_view reference_code);
/// Pools counts over all (candidate, reference) pairs before averaging.
/// Throws flakyfix::Error on an empty corpus or an empty candidate.
double corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs);

double weighted_ngram_match(const Tokens& candidate, const Tokens& reference,
                            double keyword_weight = 5.0, int max_n = 4);
double weighted_ngram_match(const TokenSeq& candidate, const TokenSeq& reference,
                            double keyword_weight = 5.0, int max_n = 4);

}  // namespace flakyfix

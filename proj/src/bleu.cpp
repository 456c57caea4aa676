#include "flakyfix/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "flakyfix/error.hpp"

namespace flakyfix {
namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> count_ngrams(const Tokens& tokens, int n) {
  std::map<Ngram, std::size_t> out;
  const auto len = static_cast<std::size_t>(n);
  if (tokens.size() < len) return out;
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++out[Ngram(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i + len))];
  }
  return out;
}

void check_candidate(const Tokens& candidate) {
  if (candidate.empty()) throw Error("bleu: empty candidate");
}

Tokens texts_of(const TokenSeq& seq) { return seq.texts(); }

}  // namespace

NgramCounts& NgramCounts::operator+=(const NgramCounts& other) {
  if (matched.size() < other.matched.size()) {
    matched.resize(other.matched.size(), 0.0);
    total.resize(other.total.size(), 0.0);
  }
  for (std::size_t i = 0; i < other.matched.size(); ++i) {
    matched[i] += other.matched[i];
    total[i] += other.total[i];
  }
  candidate_length += other.candidate_length;
  reference_length += other.reference_length;
  return *this;
}

std::size_t closest_reference_length(std::size_t candidate_length,
                                     const std::vector<Tokens>& references) {
  std::size_t best = 0;
  bool first = true;
  for (const auto& r : references) {
    const auto diff = [&](std::size_t len) {
      return len > candidate_length ? len - candidate_length : candidate_length - len;
    };
    if (first || diff(r.size()) < diff(best) || (diff(r.size()) == diff(best) && r.size() < best)) {
      best = r.size();
      first = false;
    }
  }
  return best;
}

NgramCounts ngram_counts(const Tokens& candidate, const std::vector<Tokens>& references,
                         int max_n) {
  NgramCounts out;
  out.matched.assign(static_cast<std::size_t>(max_n), 0.0);
  out.total.assign(static_cast<std::size_t>(max_n), 0.0);
  out.candidate_length = candidate.size();
  out.reference_length = closest_reference_length(candidate.size(), references);
  for (int n = 1; n <= max_n; ++n) {
    const auto cand = count_ngrams(candidate, n);
    std::map<Ngram, std::size_t> max_ref;
    for (const auto& r : references) {
      for (const auto& [g, c] : count_ngrams(r, n)) max_ref[g] = std::max(max_ref[g], c);
    }
    double m = 0, t = 0;
    for (const auto& [g, c] : cand) {
      t += static_cast<double>(c);
      auto it = max_ref.find(g);
      if (it != max_ref.end()) m += static_cast<double>(std::min(c, it->second));
    }
    out.matched[static_cast<std::size_t>(n - 1)] = m;
    out.total[static_cast<std::size_t>(n - 1)] = t;
  }
  return out;
}

NgramCounts weighted_ngram_counts(const Tokens& candidate, const Tokens& reference,
                                  double keyword_weight, int max_n) {
  NgramCounts out;
  out.matched.assign(static_cast<std::size_t>(max_n), 0.0);
  out.total.assign(static_cast<std::size_t>(max_n), 0.0);
  out.candidate_length = candidate.size();
  out.reference_length = reference.size();
  for (int n = 1; n <= max_n; ++n) {
    const auto cand = count_ngrams(candidate, n);
    const auto ref = count_ngrams(reference, n);
    double m = 0, t = 0;
    for (const auto& [g, c] : cand) {
      const double w = is_java_keyword(g.front()) ? keyword_weight : 1.0;
      t += w * static_cast<double>(c);
      auto it = ref.find(g);
      if (it != ref.end()) m += w * static_cast<double>(std::min(c, it->second));
    }
    out.matched[static_cast<std::size_t>(n - 1)] = m;
    out.total[static_cast<std::size_t>(n - 1)] = t;
  }
  return out;
}

double bleu_from_counts(const NgramCounts& counts) {
  const std::size_t orders = counts.matched.size();
  if (orders == 0 || counts.candidate_length == 0) return 0.0;
  if (counts.matched[0] <= 0.0) return 0.0;
  const bool smooth = std::any_of(counts.matched.begin(), counts.matched.end(),
                                  [](double m) { return m <= 0.0; });
  double log_sum = 0.0;
  for (std::size_t i = 0; i < orders; ++i) {
    double m = counts.matched[i], t = counts.total[i];
    if (smooth && i >= 1) {
      m += 1.0;
      t += 1.0;
    }
    log_sum += std::log(m / t);
  }
  const double c = static_cast<double>(counts.candidate_length);
  const double r = static_cast<double>(counts.reference_length);
  const double log_bp = c > r ? 0.0 : 1.0 - r / c;
  return std::exp(log_sum / static_cast<double>(orders) + log_bp);
}

double bleu(const Tokens& candidate, const std::vector<Tokens>& references, int max_n) {
  check_candidate(candidate);
  if (references.empty()) throw Error("bleu: no references");
  return bleu_from_counts(ngram_counts(candidate, references, max_n));
}

double bleu(const TokenSeq& candidate, const std::vector<TokenSeq>& references, int max_n) {
  std::vector<Tokens> refs;
  for (const auto& r : references) refs.push_back(texts_of(r));
  return bleu(texts_of(candidate), refs, max_n);
}

double sentence_bleu(std::string_view candidate_code, std::string_view reference_code) {
  return bleu(tokenize_java(candidate_code), {tokenize_java(reference_code)});
}

double corpus_bleu(const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw Error("corpus_bleu: empty corpus");
  NgramCounts pooled;
  for (const auto& [cand, ref] : pairs) {
    const Tokens c = tokenize_java(cand).texts();
    check_candidate(c);
    pooled += ngram_counts(c, {tokenize_java(ref).texts()});
  }
  return bleu_from_counts(pooled);
}

double weighted_ngram_match(const Tokens& candidate, const Tokens& reference,
                            double keyword_weight, int max_n) {
  check_candidate(candidate);
  return bleu_from_counts(weighted_ngram_counts(candidate, reference, keyword_weight, max_n));
}

double weighted_ngram_match(const TokenSeq& candidate, const TokenSeq& reference,
                            double keyword_weight, int max_n) {
  return weighted_ngram_match(texts_of(candidate), texts_of(reference), keyword_weight, max_n);
}

}  // namespace flakyfix

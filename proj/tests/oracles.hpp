#pragma once

// Slow, direct reference implementations used to cross-check the library.
// They deliberately share no code with it beyond the lexer's token texts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "flakyfix/java_ast.hpp"
#include "flakyfix/java_lexer.hpp"
#include "flakyfix/stats.hpp"

namespace oracle {

using Tokens = std::vector<std::string>;

inline std::vector<Tokens> ngrams(const Tokens& t, std::size_t n) {
  std::vector<Tokens> out;
  for (std::size_t i = 0; i + n <= t.size(); ++i) out.emplace_back(t.begin() + i, t.begin() + i + n);
  return out;
}

inline std::size_t occurrences(const std::vector<Tokens>& grams, const Tokens& g) {
  return static_cast<std::size_t>(std::count(grams.begin(), grams.end(), g));
}

inline bool keyword(const std::string& s) {
  static const std::set<std::string> kw = {
      "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
      "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
      "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long", "native",
      "new", "package", "private", "protected", "public", "return", "short", "static", "strictfp", "super",
      "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void", "volatile", "while"};
  return kw.contains(s);
}

// Clipped (optionally keyword-weighted) precision counts, one pass per
// candidate n-gram position.
inline std::pair<double, double> clipped(const Tokens& cand, const Tokens& ref, std::size_t n, double kw_weight) {
  const auto cg = ngrams(cand, n), rg = ngrams(ref, n);
  double matched = 0, total = 0;
  std::vector<Tokens> seen;
  for (const auto& g : cg) {
    const double w = keyword(g.front()) ? kw_weight : 1.0;
    total += w;
    if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
    seen.push_back(g);
    matched += w * static_cast<double>(std::min(occurrences(cg, g), occurrences(rg, g)));
  }
  return {matched, total};
}

// BLEU-4, uniform weights, brevity penalty exp(1 - r/c) for c <= r. If any
// order has zero matches, orders 2..4 use add-one counts; zero unigram
// matches give 0.
inline double bleu(const Tokens& cand, const Tokens& ref, double kw_weight = 1.0) {
  double m[4], t[4];
  bool any_zero = false;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::tie(m[n - 1], t[n - 1]) = clipped(cand, ref, n, kw_weight);
    if (m[n - 1] == 0) any_zero = true;
  }
  if (m[0] == 0) return 0.0;
  double log_p = 0;
  for (int i = 0; i < 4; ++i) {
    const double add = (any_zero && i > 0) ? 1.0 : 0.0;
    log_p += std::log((m[i] + add) / (t[i] + add)) / 4.0;
  }
  const double c = static_cast<double>(cand.size()), r = static_cast<double>(ref.size());
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return bp * std::exp(log_p);
}

inline Tokens texts(std::string_view code) { return flakyfix::tokenize_java(code).texts(); }

// Every internal node's subtree, serialized with identifiers and literals
// replaced by their kind.
inline void serialize(const flakyfix::AstNode& n, std::string& out) {
  if (n.token) {
    const auto k = n.token->kind;
    out += k == flakyfix::TokenKind::Identifier ? "identifier"
           : k == flakyfix::TokenKind::Literal  ? "literal"
                                                : n.token->text;
    return;
  }
  out += "(" + n.kind;
  for (const auto& c : n.children) {
    out += " ";
    serialize(c, out);
  }
  out += ")";
}

inline void enumerate_subtrees(const flakyfix::AstNode& n, std::vector<std::string>& out) {
  if (n.token) return;
  std::string s;
  serialize(n, s);
  out.push_back(s);
  for (const auto& c : n.children) enumerate_subtrees(c, out);
}

// Maximum one-to-one matching of equal serializations, found by trying
// every reference subtree against every unused candidate subtree.
inline double ast_match(const flakyfix::AstNode& cand, const flakyfix::AstNode& ref) {
  std::vector<std::string> cs, rs;
  enumerate_subtrees(cand, cs);
  enumerate_subtrees(ref, rs);
  if (rs.empty()) return 1.0;
  std::vector<bool> used(cs.size(), false);
  std::size_t matched = 0;
  for (const auto& r : rs) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (!used[j] && cs[j] == r) {
        used[j] = true;
        ++matched;
        break;
      }
    }
  }
  return static_cast<double>(matched) / static_cast<double>(rs.size());
}

using EdgeKey = std::tuple<std::size_t, std::size_t, std::size_t>;

inline double dataflow_match(const std::set<EdgeKey>& cand, const std::set<EdgeKey>& ref) {
  if (ref.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& e : ref) hit += cand.contains(e) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(ref.size());
}

// Plain recursive Levenshtein, exponential time.
inline std::size_t edit_distance(const Tokens& a, std::size_t i, const Tokens& b, std::size_t j) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  if (a[i] == b[j]) return edit_distance(a, i + 1, b, j + 1);
  return 1 + std::min({edit_distance(a, i + 1, b, j), edit_distance(a, i, b, j + 1),
                       edit_distance(a, i + 1, b, j + 1)});
}

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Two-sided Fisher p by enumerating every table with the same margins.
// Probabilities share the denominator C(n, c1), so the "no more likely"
// comparison is exact on integers.
inline double fisher(const flakyfix::Table2x2& t) {
  const std::uint64_t a = t[0][0], b = t[0][1], c = t[1][0], d = t[1][1];
  const std::uint64_t r1 = a + b, r2 = c + d, c1 = a + c, n = r1 + r2;
  const std::uint64_t observed = choose(r1, a) * choose(r2, c);
  std::uint64_t sum = 0;
  for (std::uint64_t x = 0; x <= std::min(r1, c1); ++x) {
    if (c1 - x > r2) continue;
    const std::uint64_t w = choose(r1, x) * choose(r2, c1 - x);
    if (w <= observed) sum += w;
  }
  return static_cast<double>(sum) / static_cast<double>(choose(n, c1));
}

// Exact two-sided signed-rank p by enumerating all 2^n sign patterns.
inline double wilcoxon_exact(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double v : diffs) {
    if (v != 0) d.push_back(v);
  }
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++below;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = below + (equal + 1) / 2.0;
  }
  double w_obs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) w_obs += rank[i];
  }
  std::size_t ge = 0, le = 0, total = 0;
  std::function<void(std::size_t, double)> walk = [&](std::size_t i, double w) {
    if (i == n) {
      ++total;
      if (w >= w_obs - 1e-9) ++ge;
      if (w <= w_obs + 1e-9) ++le;
      return;
    }
    walk(i + 1, w + rank[i]);
    walk(i + 1, w);
  };
  walk(0, 0.0);
  return std::min(1.0, 2.0 * static_cast<double>(std::min(ge, le)) / static_cast<double>(total));
}

}  // namespace oracle

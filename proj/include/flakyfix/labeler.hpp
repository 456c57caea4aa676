#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flakyfix/category.hpp"
#include "flakyfix/corpus.hpp"

namespace flakyfix {

enum class MatcherKind {
  Token,               // keyword patterns on deleted/added/either side
  PairReplacement,     // deleted `from` with added `to`
  CallArgPermutation,  // same callee, same argument multiset, new order
  LiteralChange,       // same callee, one literal argument rewritten
  CountChange,         // occurrence count of a keyword differs between sides
  SuffixSetChange,     // identifiers ending in a suffix differ between sides
  KeywordLineChange,   // lines mentioning a keyword on both sides differ
  StaticCall,          // new `Type.method(` call on added lines
  Chain,               // `...match...` followed by `.isEqualTo` on one added line
};

std::string_view matcher_kind_name(MatcherKind k);

struct Rule {
  std::string name;
  FixCategory category = FixCategory::Miscellaneous;
  MatcherKind kind = MatcherKind::Token;
  std::vector<std::string> deleted;
  std::vector<std::string> added;
  std::vector<std::string> either;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::string> tokens;
  std::vector<std::string> exclude_types;
  std::string contains;
  std::string suffix;
  std::string then;
  bool require_different = false;
  bool absent_from_deleted = false;
  std::size_t min_length = 8;
};

class RuleSet {
 public:
  /// Throws flakyfix::Error naming the offending rule on malformed input.
  static RuleSet parse(std::string_view json_text);
  static RuleSet load(const std::string& path);
  /// The bundled table (data/rules.json at build time).
  static const RuleSet& defaults();

  const std::vector<Rule>& rules() const { return rules_; }
  /// Overrides min_length of every literal-change rule.
  void set_min_literal_length(std::size_t n);

 private:
  std::vector<Rule> rules_;
};

struct MatchedToken {
  std::size_t line = 0;  // old_line for deleted, new_line for added
  std::string token;     // exact source text found on that line

  auto operator<=>(const MatchedToken&) const = default;
};

struct RuleMatch {
  FixCategory category = FixCategory::Miscellaneous;
  std::string rule;
  std::set<MatchedToken> matched_deleted;
  std::set<MatchedToken> matched_added;
};

struct LabelResult {
  LabelSet labels = LabelSet::miscellaneous();
  std::vector<RuleMatch> matches;
};

/// Labels the diff between the two versions. Throws flakyfix::Error
/// "empty diff" when the texts are identical.
LabelResult label_diff(std::string_view flaky_code, std::string_view fixed_code,
                       const RuleSet& rules = RuleSet::defaults());

/// Throws "unlabeled record" without a fix, and "empty diff" when unchanged;
/// messages name the record id.
LabelResult label_record(const TestRecord& record, const RuleSet& rules = RuleSet::defaults());

struct CorpusLabeling {
  Corpus corpus;  // known_labels populated where a fix exists
  std::map<FixCategory, std::size_t> counts;  // every category present, possibly 0
  std::vector<std::string> unlabeled_ids;     // records without fixed_code
};

CorpusLabeling label_corpus(const Corpus& corpus, const RuleSet& rules = RuleSet::defaults());

struct LabelMismatch {
  std::string id;
  LabelSet gold;
  LabelSet predicted;
};

struct LabelerEvaluation {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<LabelMismatch> mismatches;
};

/// Gold labels come from known_labels; a record counts as correct only when
/// the predicted set equals the gold set exactly.
LabelerEvaluation evaluate_labeler(const Corpus& gold, const RuleSet& rules = RuleSet::defaults());

}  // namespace flakyfix

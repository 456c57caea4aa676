#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "flakyfix/category.hpp"

namespace flakyfix {

enum class ExecutionOutcome { Pass, Fail, Unknown };

std::string_view outcome_name(ExecutionOutcome o);

// One flaky test method together with its developer fix, when known.
struct TestRecord {
  std::string id;
  std::string project;
  std::string test_name;
  std::string flaky_code;
  std::optional<std::string> fixed_code;
  std::optional<LabelSet> known_labels;
  std::optional<ExecutionOutcome> execution_outcome;
  std::optional<std::string> source_url;
  std::optional<std::string> date;  // ISO-8601, YYYY-MM-DD[...]

  bool has_fix() const { return fixed_code.has_value(); }
  friend bool operator==(const TestRecord&, const TestRecord&) = default;
};

using Corpus = std::vector<TestRecord>;

enum class CorpusFormat { Jsonl, Csv };

/// Infers the format from the extension (.csv -> Csv, anything else -> Jsonl).
CorpusFormat format_for_path(const std::string& path);

/// Loads records in file order, dropping duplicates. Two records are
/// duplicates when project, test name and the whitespace-normalized
/// flaky code hash all match. Malformed records raise flakyfix::Error naming
/// the line (jsonl) or record index (csv).
Corpus load_corpus(const std::string& path, CorpusFormat format);
Corpus load_corpus(const std::string& path);

Corpus parse_corpus_jsonl(std::string_view text);
Corpus parse_corpus_csv(std::string_view text);

void save_corpus(const Corpus& corpus, const std::string& path, CorpusFormat format);
std::string to_jsonl(const Corpus& corpus);
std::string to_csv(const Corpus& corpus);

/// Collapses runs of spaces/tabs, strips trailing whitespace per line and
/// normalizes CRLF.
std::string normalize_whitespace(std::string_view code);
std::string content_hash(std::string_view code);

Corpus deduplicate(const Corpus& corpus);

// --- line diff --------------------------------------------------------------

enum class DiffKind { Added, Deleted, Context };

struct DiffLine {
  DiffKind kind;
  std::string text;
  std::optional<std::size_t> old_line;  // 1-based
  std::optional<std::size_t> new_line;  // 1-based

  friend bool operator==(const DiffLine&, const DiffLine&) = default;
};

struct CodeDiff {
  std::vector<DiffLine> lines;

  std::vector<const DiffLine*> added() const;
  std::vector<const DiffLine*> deleted() const;
  /// Context + deleted lines joined; equals the old text.
  std::string old_text() const;
  /// Context + added lines joined; equals the new text.
  std::string new_text() const;
  bool empty_change() const { return added().empty() && deleted().empty(); }
};

/// Splits on '\n'. The empty string has zero lines.
std::vector<std::string> split_lines(std::string_view text);

/// Minimal line diff under an LCS alignment (no move detection).
CodeDiff compute_diff(std::string_view old_text, std::string_view new_text);

// --- filtering --------------------------------------------------------------

struct HasFix {};
struct FixedAfter {
  std::string date;  // YYYY-MM-DD
};
struct ProjectIn {
  std::set<std::string> projects;
};
struct MinProjectCount {
  std::size_t n;
};
using RecordPredicate = std::variant<HasFix, FixedAfter, ProjectIn, MinProjectCount>;

/// Parses "has_fix", "fixed_after:YYYY-MM-DD", "project_in:a,b",
/// "min_project_count:N". Throws flakyfix::Error on a bad predicate or date.
RecordPredicate parse_predicate(std::string_view spec);

/// Order-preserving subset; records themselves are copied untouched.
Corpus filter_records(const Corpus& corpus, const RecordPredicate& predicate);

}  // namespace flakyfix

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flakyfix/codebleu.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/repair.hpp"
#include "flakyfix/stats.hpp"

namespace flakyfix {

// One scored repair. Component scores are on the 0-1 scale.
struct ScoreRow {
  std::string record_id;
  std::string prompt_kind;
  std::vector<std::string> categories;  // category ids; empty when unlabeled
  double bleu = 0;
  double weighted = 0;
  double ast = 0;
  double dataflow = 0;
  double codebleu = 0;
  double edit_distance = 0;
  std::optional<double> pct_changed;
  std::optional<bool> outcome;  // recorded execution result, when known
};

inline constexpr std::string_view kScoreMetrics[] = {"bleu", "weighted", "ast", "dataflow", "codebleu",
                                                     "edit_distance", "pct_changed"};

/// Value of a metric by column name; empty for an undefined pct_changed.
std::optional<double> metric_value(const ScoreRow& row, std::string_view metric);

/// Scores every result against its record's developer fix. Throws
/// flakyfix::Error naming the first result whose id is not in the corpus, or
/// whose record has no fix.
std::vector<ScoreRow> score_results(const std::vector<RepairResult>& results, const Corpus& corpus,
                                    const CodeBleuOptions& options = {});

std::string scores_to_csv(const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> parse_scores_csv(std::string_view text);
std::vector<ScoreRow> load_scores(const std::string& path);

struct MetricSummary {
  std::size_t count = 0;
  double mean = 0;
  double median = 0;
};

// Per category (plus "All") and metric. Multi-label records count toward each
// of their categories; unlabeled ones toward "Unlabeled".
struct ScoreSummary {
  std::map<std::string, std::map<std::string, MetricSummary>> by_category;
};

ScoreSummary summarize_scores(const std::vector<ScoreRow>& rows);
std::string render_summary(const ScoreSummary& summary);

// --- estimate -------------------------------------------------------------------

struct KindProjection {
  std::string prompt_kind;
  std::size_t n = 0;
  PassProjection projection;
};

struct Estimate {
  std::size_t observed = 0;  // rows with an outcome
  BootstrapResult bootstrap;
  std::optional<LogisticModel> model;  // absent when outcomes are one-sided
  std::string model_note;
  std::vector<KindProjection> projections;
};

/// Bootstrap over recorded outcomes, logistic fit of outcome on CodeBLEU
/// (0-100 scale), and pass-count bounds for every prompt kind's rows.
Estimate estimate_pass_rates(const std::vector<ScoreRow>& rows, std::size_t iterations = 10000,
                             std::uint64_t seed = kDefaultBootstrapSeed, double level = 0.95);

std::string estimate_to_json(const Estimate& e);
Estimate estimate_from_json(std::string_view text);
std::string projection_csv(const Estimate& e);
std::string render_estimate(const Estimate& e);

// --- report ---------------------------------------------------------------------

struct KindComparison {
  std::string kind_a, kind_b;
  std::size_t pairs = 0;
  double mean_a = 0, mean_b = 0;
  std::optional<WilcoxonResult> wilcoxon;  // empty when every pair ties
};

struct Report {
  std::vector<std::string> kinds;
  // category -> kind -> metric -> summary
  std::map<std::string, std::map<std::string, std::map<std::string, MetricSummary>>> cells;
  std::vector<KindComparison> comparisons;
  std::vector<KindProjection> projections;
};

/// Throws flakyfix::Error on empty input. Comparisons pair CodeBLEU scores by
/// record id across each pair of kinds.
Report build_report(const std::vector<ScoreRow>& rows, const std::optional<Estimate>& estimate = std::nullopt);

/// Markdown tables.
std::string render_report(const Report& report);

}  // namespace flakyfix

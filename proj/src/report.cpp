#include "flakyfix/report.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "flakyfix/csv.hpp"
#include "flakyfix/edit_distance.hpp"
#include "flakyfix/error.hpp"

namespace flakyfix {
namespace {

using nlohmann::json;

std::string num(double v) { return fmt::format("{:.6f}", v); }

double parse_double(const std::string& s, std::size_t row, std::string_view column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(fmt::format("scores row {}: bad number '{}' in column {}", row, s, column));
  }
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int kind_rank(const std::string& kind) {
  const auto k = parse_prompt_kind(kind);
  return k ? static_cast<int>(*k) : 100;
}

std::map<std::string, MetricSummary> summarize_metrics(const std::vector<const ScoreRow*>& rows) {
  std::map<std::string, MetricSummary> out;
  for (auto metric : kScoreMetrics) {
    std::vector<double> values;
    for (const auto* r : rows) {
      if (auto v = metric_value(*r, metric)) values.push_back(*v);
    }
    MetricSummary s;
    s.count = values.size();
    if (!values.empty()) {
      s.mean = mean(values);
      s.median = median(values);
    }
    out.emplace(std::string(metric), s);
  }
  return out;
}

std::map<std::string, std::vector<const ScoreRow*>> group_by_category(const std::vector<const ScoreRow*>& rows) {
  std::map<std::string, std::vector<const ScoreRow*>> groups;
  for (const auto* r : rows) {
    groups["All"].push_back(r);
    if (r->categories.empty()) groups["Unlabeled"].push_back(r);
    for (const auto& c : r->categories) groups[c].push_back(r);
  }
  return groups;
}

// Category order for display: canonical enum order, then the rest.
std::vector<std::string> ordered_categories(const std::set<std::string>& present) {
  std::vector<std::string> out;
  for (FixCategory c : kAllCategories) {
    if (present.contains(std::string(category_id(c)))) out.emplace_back(category_id(c));
  }
  for (const auto& p : present) {
    if (p != "All" && p != "Unlabeled" && !parse_category(p)) out.push_back(p);
  }
  if (present.contains("Unlabeled")) out.emplace_back("Unlabeled");
  if (present.contains("All")) out.emplace_back("All");
  return out;
}

std::string display_category(const std::string& id) {
  const auto c = parse_category(id);
  return c ? std::string(category_display_name(*c)) : id;
}

// Component scores print on the 0-100 scale.
std::string show(std::string_view metric, double v) {
  if (metric == "edit_distance") return fmt::format("{:.2f}", v);
  return fmt::format("{:.2f}", v * 100.0);
}

json model_json(const LogisticModel& m) {
  return {{"intercept", m.intercept},
          {"slope", m.slope},
          {"covariance", {{m.covariance[0][0], m.covariance[0][1]}, {m.covariance[1][0], m.covariance[1][1]}}},
          {"converged", m.converged},
          {"iterations", m.iterations},
          {"log_likelihood", m.log_likelihood},
          {"null_log_likelihood", m.null_log_likelihood},
          {"lr_chi_square", m.lr_chi_square},
          {"lr_p_value", m.lr_p_value},
          {"accuracy", m.accuracy}};
}

}  // namespace

std::optional<double> metric_value(const ScoreRow& row, std::string_view metric) {
  if (metric == "bleu") return row.bleu;
  if (metric == "weighted") return row.weighted;
  if (metric == "ast") return row.ast;
  if (metric == "dataflow") return row.dataflow;
  if (metric == "codebleu") return row.codebleu;
  if (metric == "edit_distance") return row.edit_distance;
  if (metric == "pct_changed") return row.pct_changed;
  throw Error(fmt::format("unknown metric {}", metric));
}

std::vector<ScoreRow> score_results(const std::vector<RepairResult>& results, const Corpus& corpus,
                                    const CodeBleuOptions& options) {
  validate_weights(options.weights);
  std::unordered_map<std::string, const TestRecord*> by_id;
  for (const auto& r : corpus) by_id.emplace(r.id, &r);
  for (const auto& res : results) {
    if (!by_id.contains(res.record_id)) {
      throw Error(fmt::format("result for record id '{}' has no matching corpus record", res.record_id));
    }
  }
  std::vector<ScoreRow> rows;
  for (const auto& res : results) {
    const TestRecord& rec = *by_id.at(res.record_id);
    if (!rec.fixed_code) throw Error(fmt::format("record {}: no developer fix to score against", rec.id));
    ScoreRow row;
    row.record_id = res.record_id;
    row.prompt_kind = std::string(prompt_kind_name(res.prompt_kind));
    if (rec.known_labels) {
      for (FixCategory c : rec.known_labels->categories()) row.categories.emplace_back(category_id(c));
    }
    try {
      const auto cb = codebleu(res.generated_code, *rec.fixed_code, options);
      row.bleu = cb.bleu;
      row.weighted = cb.weighted_bleu;
      row.ast = cb.ast_match;
      row.dataflow = cb.dataflow_match;
      row.codebleu = cb.composite;
    } catch (const Error& e) {
      throw Error(fmt::format("record {}: {}", rec.id, e.what()));
    }
    const auto ed = token_edit_distance(res.generated_code, *rec.fixed_code);
    row.edit_distance = static_cast<double>(ed.distance);
    row.pct_changed = ed.pct_changed;
    if (rec.execution_outcome == ExecutionOutcome::Pass) row.outcome = true;
    if (rec.execution_outcome == ExecutionOutcome::Fail) row.outcome = false;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string scores_to_csv(const std::vector<ScoreRow>& rows) {
  std::string out = csv::format_row({"record_id", "prompt_kind", "bleu", "weighted", "ast", "dataflow", "codebleu",
                                     "edit_distance", "pct_changed", "categories", "outcome"});
  for (const auto& r : rows) {
    std::string cats;
    for (const auto& c : r.categories) cats += (cats.empty() ? "" : "|") + c;
    out += csv::format_row({r.record_id, r.prompt_kind, num(r.bleu), num(r.weighted), num(r.ast), num(r.dataflow),
                            num(r.codebleu), fmt::format("{}", r.edit_distance),
                            r.pct_changed ? num(*r.pct_changed) : "", cats,
                            r.outcome ? (*r.outcome ? "pass" : "fail") : ""});
  }
  return out;
}

std::vector<ScoreRow> parse_scores_csv(std::string_view text) {
  const auto table = csv::parse(text);
  if (table.empty()) throw Error("scores file is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < table[0].size(); ++i) col[table[0][i]] = i;
  for (const char* needed : {"record_id", "prompt_kind", "codebleu"}) {
    if (!col.contains(needed)) throw Error(fmt::format("scores file lacks column {}", needed));
  }
  std::vector<ScoreRow> rows;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const auto& t = table[i];
    if (t.size() == 1 && t[0].empty()) continue;
    auto get = [&](const std::string& name) -> std::string {
      const auto it = col.find(name);
      return it == col.end() || it->second >= t.size() ? std::string() : t[it->second];
    };
    auto number = [&](const std::string& name) {
      const auto s = get(name);
      return s.empty() ? 0.0 : parse_double(s, i, name);
    };
    ScoreRow r;
    r.record_id = get("record_id");
    r.prompt_kind = get("prompt_kind");
    r.categories = split(get("categories"), '|');
    r.bleu = number("bleu");
    r.weighted = number("weighted");
    r.ast = number("ast");
    r.dataflow = number("dataflow");
    r.codebleu = parse_double(get("codebleu"), i, "codebleu");
    r.edit_distance = number("edit_distance");
    if (const auto p = get("pct_changed"); !p.empty()) r.pct_changed = parse_double(p, i, "pct_changed");
    const auto o = get("outcome");
    if (o == "pass" || o == "1" || o == "true") r.outcome = true;
    else if (o == "fail" || o == "0" || o == "false") r.outcome = false;
    else if (!o.empty()) throw Error(fmt::format("scores row {}: bad outcome '{}'", i, o));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ScoreRow> load_scores(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return parse_scores_csv(std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()});
}

ScoreSummary summarize_scores(const std::vector<ScoreRow>& rows) {
  std::vector<const ScoreRow*> ptrs;
  for (const auto& r : rows) ptrs.push_back(&r);
  ScoreSummary s;
  for (const auto& [cat, group] : group_by_category(ptrs)) s.by_category.emplace(cat, summarize_metrics(group));
  return s;
}

std::string render_summary(const ScoreSummary& summary) {
  std::set<std::string> present;
  for (const auto& [cat, _] : summary.by_category) present.insert(cat);
  std::string out = "category,n,metric,mean,median\n";
  for (const auto& cat : ordered_categories(present)) {
    for (auto metric : kScoreMetrics) {
      const auto& m = summary.by_category.at(cat).at(std::string(metric));
      out += csv::format_row({cat, std::to_string(m.count), std::string(metric), num(m.mean), num(m.median)});
    }
  }
  return out;
}

// --- estimate ------------------------------------------------------------------

Estimate estimate_pass_rates(const std::vector<ScoreRow>& rows, std::size_t iterations, std::uint64_t seed,
                             double level) {
  std::vector<bool> outcomes;
  std::vector<double> x, y;
  for (const auto& r : rows) {
    if (!r.outcome) continue;
    outcomes.push_back(*r.outcome);
    x.push_back(r.codebleu * 100.0);
    y.push_back(*r.outcome ? 1.0 : 0.0);
  }
  if (outcomes.empty()) throw Error("no scored row carries an execution outcome");
  Estimate e;
  e.observed = outcomes.size();
  e.bootstrap = bootstrap_pass_rate(outcomes, level, iterations, seed);
  try {
    e.model = fit_logistic(x, y);
  } catch (const Error& err) {
    e.model_note = err.what();
    return e;
  }
  std::map<std::string, std::vector<double>> by_kind;
  for (const auto& r : rows) by_kind[r.prompt_kind].push_back(r.codebleu * 100.0);
  for (const auto& [kind, scores] : by_kind) {
    e.projections.push_back({kind, scores.size(), project_pass_bounds(*e.model, scores, level)});
  }
  std::sort(e.projections.begin(), e.projections.end(),
            [](const auto& a, const auto& b) { return kind_rank(a.prompt_kind) < kind_rank(b.prompt_kind); });
  return e;
}

std::string estimate_to_json(const Estimate& e) {
  json j = {{"observed", e.observed},
            {"bootstrap",
             {{"point_estimate", e.bootstrap.point_estimate},
              {"lower", e.bootstrap.lower},
              {"upper", e.bootstrap.upper},
              {"level", e.bootstrap.level},
              {"iterations", e.bootstrap.iterations},
              {"seed", e.bootstrap.seed}}},
            {"model", e.model ? model_json(*e.model) : json(nullptr)},
            {"model_note", e.model_note}};
  json proj = json::array();
  for (const auto& p : e.projections) {
    proj.push_back({{"prompt_kind", p.prompt_kind},
                    {"n", p.n},
                    {"low_count", p.projection.low_count},
                    {"high_count", p.projection.high_count},
                    {"low_pct", p.projection.low_pct},
                    {"high_pct", p.projection.high_pct},
                    {"low_sum", p.projection.low_sum},
                    {"high_sum", p.projection.high_sum}});
  }
  j["projections"] = proj;
  return j.dump(1);
}

Estimate estimate_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    Estimate e;
    e.observed = j.at("observed").get<std::size_t>();
    const auto& b = j.at("bootstrap");
    e.bootstrap.point_estimate = b.at("point_estimate").get<double>();
    e.bootstrap.lower = b.at("lower").get<double>();
    e.bootstrap.upper = b.at("upper").get<double>();
    e.bootstrap.level = b.at("level").get<double>();
    e.bootstrap.iterations = b.at("iterations").get<std::size_t>();
    e.bootstrap.seed = b.at("seed").get<std::uint64_t>();
    if (!j.at("model").is_null()) {
      const auto& m = j.at("model");
      LogisticModel lm;
      lm.intercept = m.at("intercept").get<double>();
      lm.slope = m.at("slope").get<double>();
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) lm.covariance[r][c] = m.at("covariance").at(r).at(c).get<double>();
      }
      lm.converged = m.at("converged").get<bool>();
      lm.iterations = m.at("iterations").get<std::size_t>();
      lm.log_likelihood = m.at("log_likelihood").get<double>();
      lm.null_log_likelihood = m.at("null_log_likelihood").get<double>();
      lm.lr_chi_square = m.at("lr_chi_square").get<double>();
      lm.lr_p_value = m.at("lr_p_value").get<double>();
      lm.accuracy = m.at("accuracy").get<double>();
      e.model = lm;
    }
    e.model_note = j.value("model_note", "");
    for (const auto& p : j.at("projections")) {
      KindProjection kp;
      kp.prompt_kind = p.at("prompt_kind").get<std::string>();
      kp.n = p.at("n").get<std::size_t>();
      kp.projection.low_count = p.at("low_count").get<std::size_t>();
      kp.projection.high_count = p.at("high_count").get<std::size_t>();
      kp.projection.low_pct = p.at("low_pct").get<double>();
      kp.projection.high_pct = p.at("high_pct").get<double>();
      kp.projection.low_sum = p.at("low_sum").get<double>();
      kp.projection.high_sum = p.at("high_sum").get<double>();
      e.projections.push_back(kp);
    }
    return e;
  } catch (const json::exception& err) {
    throw Error(std::string("estimate file: ") + err.what());
  }
}

std::string projection_csv(const Estimate& e) {
  std::string out = "prompt_kind,n,low_count,high_count,low_pct,high_pct,low_sum,high_sum\n";
  for (const auto& p : e.projections) {
    out += csv::format_row({p.prompt_kind, std::to_string(p.n), std::to_string(p.projection.low_count),
                            std::to_string(p.projection.high_count), num(p.projection.low_pct),
                            num(p.projection.high_pct), num(p.projection.low_sum), num(p.projection.high_sum)});
  }
  return out;
}

std::string render_estimate(const Estimate& e) {
  std::string out;
  const auto& b = e.bootstrap;
  out += fmt::format("Observed outcomes: {}\n", e.observed);
  out += fmt::format("Pass rate {:.4f}, {:.0f}% bootstrap interval [{:.4f}, {:.4f}] ({} resamples, seed {})\n",
                     b.point_estimate, b.level * 100, b.lower, b.upper, b.iterations, b.seed);
  if (!e.model) {
    out += "Logistic model: not fitted (" + e.model_note + ")\n";
    return out;
  }
  const auto& m = *e.model;
  out += fmt::format("Logistic model: logit(p) = {:.6f} + {:.6f} * CodeBLEU\n", m.intercept, m.slope);
  out += fmt::format("  covariance [[{:.6g}, {:.6g}], [{:.6g}, {:.6g}]]\n", m.covariance[0][0], m.covariance[0][1],
                     m.covariance[1][0], m.covariance[1][1]);
  out += fmt::format("  likelihood-ratio chi-square {:.4f}, p = {:.4f}; accuracy {:.4f}; {} iterations\n",
                     m.lr_chi_square, m.lr_p_value, m.accuracy, m.iterations);
  out += "Projected passing tests:\n";
  for (const auto& p : e.projections) {
    out += fmt::format("  {:<10} n={:<5} {}-{} ({:.0f}%-{:.0f}%)\n", p.prompt_kind, p.n, p.projection.low_count,
                       p.projection.high_count, p.projection.low_pct * 100, p.projection.high_pct * 100);
  }
  return out;
}

// --- report -----------------------------------------------------------------------

Report build_report(const std::vector<ScoreRow>& rows, const std::optional<Estimate>& estimate) {
  if (rows.empty()) throw Error("report: no scored results");
  Report rep;
  std::map<std::string, std::vector<const ScoreRow*>> by_kind;
  for (const auto& r : rows) by_kind[r.prompt_kind].push_back(&r);
  for (const auto& [k, _] : by_kind) rep.kinds.push_back(k);
  std::sort(rep.kinds.begin(), rep.kinds.end(),
            [](const auto& a, const auto& b) { return std::pair(kind_rank(a), a) < std::pair(kind_rank(b), b); });

  for (const auto& [kind, group] : by_kind) {
    for (const auto& [cat, members] : group_by_category(group)) rep.cells[cat][kind] = summarize_metrics(members);
  }

  std::map<std::string, std::map<std::string, double>> score_of;
  for (const auto& r : rows) {
    if (!score_of[r.prompt_kind].emplace(r.record_id, r.codebleu).second) {
      throw Error(fmt::format("report: record {} appears twice for prompt kind {}", r.record_id, r.prompt_kind));
    }
  }
  for (std::size_t a = 0; a < rep.kinds.size(); ++a) {
    for (std::size_t b = a + 1; b < rep.kinds.size(); ++b) {
      KindComparison c;
      c.kind_a = rep.kinds[a];
      c.kind_b = rep.kinds[b];
      std::vector<double> xa, xb;
      for (const auto& [id, s] : score_of[c.kind_a]) {
        const auto it = score_of[c.kind_b].find(id);
        if (it == score_of[c.kind_b].end()) continue;
        xa.push_back(s);
        xb.push_back(it->second);
      }
      c.pairs = xa.size();
      if (c.pairs > 0) {
        c.mean_a = mean(xa);
        c.mean_b = mean(xb);
        try {
          c.wilcoxon = wilcoxon_signed_rank(xb, xa);
        } catch (const Error&) {
        }
      }
      rep.comparisons.push_back(c);
    }
  }
  if (estimate) rep.projections = estimate->projections;
  return rep;
}

std::string render_report(const Report& rep) {
  std::string out = "# Repair evaluation report\n";
  std::set<std::string> present;
  for (const auto& [cat, _] : rep.cells) present.insert(cat);
  const auto cats = ordered_categories(present);

  for (auto metric : kScoreMetrics) {
    out += fmt::format("\n## {} by fix category\n\n| Category |", metric);
    for (const auto& k : rep.kinds) out += fmt::format(" {} n | {} mean | {} median |", k, k, k);
    out += "\n|---|";
    for (std::size_t i = 0; i < rep.kinds.size(); ++i) out += "---:|---:|---:|";
    out += "\n";
    for (const auto& cat : cats) {
      out += "| " + display_category(cat) + " |";
      for (const auto& k : rep.kinds) {
        const auto kit = rep.cells.at(cat).find(k);
        if (kit == rep.cells.at(cat).end() || kit->second.at(std::string(metric)).count == 0) {
          out += " 0 | - | - |";
          continue;
        }
        const auto& m = kit->second.at(std::string(metric));
        out += fmt::format(" {} | {} | {} |", m.count, show(metric, m.mean), show(metric, m.median));
      }
      out += "\n";
    }
  }

  out += "\n## Prompt kind comparison (CodeBLEU, paired by record)\n\n";
  out += "| A | B | pairs | mean A | mean B | W+ (B over A) | W- | p | test |\n|---|---|---:|---:|---:|---:|---:|---:|---|\n";
  for (const auto& c : rep.comparisons) {
    if (c.wilcoxon) {
      out += fmt::format("| {} | {} | {} | {:.2f} | {:.2f} | {} | {} | {:.6f} | {} |\n", c.kind_a, c.kind_b, c.pairs,
                         c.mean_a * 100, c.mean_b * 100, c.wilcoxon->w_plus, c.wilcoxon->w_minus,
                         c.wilcoxon->p_value, c.wilcoxon->exact ? "exact" : "normal");
    } else {
      out += fmt::format("| {} | {} | {} | {:.2f} | {:.2f} | - | - | - | no nonzero differences |\n", c.kind_a,
                         c.kind_b, c.pairs, c.mean_a * 100, c.mean_b * 100);
    }
  }

  if (!rep.projections.empty()) {
    out += "\n## Projected passing tests\n\n| prompt kind | n | low | high | low % | high % |\n|---|---:|---:|---:|---:|---:|\n";
    for (const auto& p : rep.projections) {
      out += fmt::format("| {} | {} | {} | {} | {:.1f} | {:.1f} |\n", p.prompt_kind, p.n, p.projection.low_count,
                         p.projection.high_count, p.projection.low_pct * 100, p.projection.high_pct * 100);
    }
  }
  return out;
}

}  // namespace flakyfix

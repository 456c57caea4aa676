#include "flakyfix/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "flakyfix/augment.hpp"
#include "flakyfix/config.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/embeddings.hpp"
#include "flakyfix/error.hpp"
#include "flakyfix/fewshot.hpp"
#include "flakyfix/hashing.hpp"
#include "flakyfix/labeler.hpp"
#include "flakyfix/random.hpp"
#include "flakyfix/repair.hpp"
#include "flakyfix/report.hpp"

namespace flakyfix {
namespace {

struct Context {
  Config cfg;
  RunManifest manifest;
  std::ostream& out;
  std::ostream& err;

  void input(const std::string& path) { manifest.inputs[path] = sha256_file(path); }
  void output(const std::string& path, const std::string& data) {
    write_file_atomically(path, data);
    manifest.outputs.push_back(path);
  }
  std::uint64_t seed(const std::string& label) {
    const auto s = derive_seed(cfg.seed, label);
    manifest.seeds[label] = s;
    return s;
  }
};

Corpus read_corpus(Context& ctx, const std::string& path) {
  ctx.input(path);
  return load_corpus(path);
}

void write_corpus(Context& ctx, const Corpus& corpus, const std::string& path) {
  ctx.output(path, format_for_path(path) == CorpusFormat::Csv ? to_csv(corpus) : to_jsonl(corpus));
}

FixCategory category_arg(const std::string& text) {
  const auto c = parse_category(text);
  if (!c) throw UsageError("unknown fix category: " + text);
  return *c;
}

std::vector<FixCategory> category_args(const std::vector<std::string>& given) {
  std::vector<FixCategory> out;
  if (given.empty()) return {kAllCategories.begin(), kAllCategories.end()};
  for (const auto& g : given) out.push_back(category_arg(g));
  return out;
}

std::string join_matches(const std::set<MatchedToken>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += fmt::format("{}{}:{}", s.empty() ? "" : " ", t.line, t.token);
  return s;
}

// Memoized embeddings keyed by code text.
class Embedder {
 public:
  Embedder(EmbeddingProvider& provider, std::size_t max_tokens) : provider_(provider), budget_{max_tokens} {
    budget_.validate();
  }
  Vec operator()(const std::string& code) {
    auto it = cache_.find(code);
    if (it == cache_.end()) {
      const auto r = embed(code, provider_, budget_);
      it = cache_.emplace(code, Eigen::Map<const Vec>(r.embedding.values.data(),
                                                        static_cast<Eigen::Index>(r.embedding.dim())))
               .first;
    }
    return it->second;
  }

 private:
  EmbeddingProvider& provider_;
  TokenBudget budget_;
  std::map<std::string, Vec> cache_;
};

std::unique_ptr<BinaryClassifier> make_classifier(const std::string& method, TrainConfig config) {
  if (method == "fnn") return std::make_unique<FnnClassifier>(std::move(config));
  return std::make_unique<FslClassifier>(std::move(config));
}

// --- subcommands --------------------------------------------------------------------

struct LabelArgs {
  std::string corpus, out, rules;
  std::optional<std::size_t> min_literal_length;
  bool explain = false, evaluate = false;
};

void cmd_label(Context& ctx, const LabelArgs& a) {
  if (!a.rules.empty()) ctx.cfg.rules_path = a.rules;
  if (a.min_literal_length) ctx.cfg.min_literal_length = a.min_literal_length;
  RuleSet rules = RuleSet::defaults();
  if (!ctx.cfg.rules_path.empty()) {
    ctx.input(ctx.cfg.rules_path);
    rules = RuleSet::load(ctx.cfg.rules_path);
  }
  if (ctx.cfg.min_literal_length) rules.set_min_literal_length(*ctx.cfg.min_literal_length);
  const Corpus corpus = read_corpus(ctx, a.corpus);

  if (a.evaluate) {
    const auto ev = evaluate_labeler(corpus, rules);
    ctx.out << fmt::format("Labeler accuracy: {}/{} = {:.4f}\n", ev.correct, ev.total, ev.accuracy);
    for (const auto& m : ev.mismatches) {
      ctx.out << fmt::format("  mismatch {}: expected [{}], labeled [{}]\n", m.id, m.gold.display_names(),
                             m.predicted.display_names());
    }
  }
  const auto labeling = label_corpus(corpus, rules);
  write_corpus(ctx, labeling.corpus, a.out);
  if (a.explain) {
    for (const auto& rec : corpus) {
      if (!rec.fixed_code) continue;
      const auto res = label_record(rec, rules);
      ctx.out << rec.id << ": " << res.labels.display_names() << "\n";
      for (const auto& m : res.matches) {
        ctx.out << fmt::format("  {} -> {}", m.rule, category_display_name(m.category));
        if (!m.matched_deleted.empty()) ctx.out << "  deleted[" << join_matches(m.matched_deleted) << "]";
        if (!m.matched_added.empty()) ctx.out << "  added[" << join_matches(m.matched_added) << "]";
        ctx.out << "\n";
      }
    }
  }
  ctx.out << "Fix category counts:\n";
  for (FixCategory c : kAllCategories) {
    ctx.out << fmt::format("  {:<22} {}\n", category_display_name(c), labeling.counts.at(c));
  }
  if (!labeling.unlabeled_ids.empty()) {
    ctx.out << fmt::format("  {:<22} {}\n", "(no fix, unlabeled)", labeling.unlabeled_ids.size());
  }
}

struct AugmentArgs {
  std::string corpus, out, category;
};

void cmd_augment(Context& ctx, const AugmentArgs& a) {
  const FixCategory cat = category_arg(a.category);
  const Corpus corpus = read_corpus(ctx, a.corpus);
  const auto pool = augment_training_pool(corpus, cat, ctx.seed("augment"));
  write_corpus(ctx, pool.records, a.out);
  const auto positives = static_cast<std::size_t>(std::count(pool.positive.begin(), pool.positive.end(), true));
  ctx.out << fmt::format("{}: {} records ({} original, {} synthetic), {} positive, {} negative\n",
                         category_display_name(cat), pool.records.size(), corpus.size(),
                         pool.records.size() - corpus.size(), positives, pool.records.size() - positives);
}

struct TrainArgs {
  std::string corpus, out, method;
  std::vector<std::string> categories;
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
};

void apply_train_overrides(Context& ctx, const std::string& method, std::optional<std::size_t> epochs,
                           std::optional<double> lr) {
  if (!method.empty()) ctx.cfg.method = method;
  if (epochs) ctx.cfg.train.epochs = *epochs;
  if (lr) ctx.cfg.train.learning_rate = *lr;
  ctx.cfg.validate();
}

void cmd_train(Context& ctx, const TrainArgs& a) {
  apply_train_overrides(ctx, a.method, a.epochs, a.learning_rate);
  const Corpus corpus = read_corpus(ctx, a.corpus);
  auto provider = make_provider(ctx.cfg);
  Embedder embedder(*provider, ctx.cfg.max_tokens);
  ModelBundle bundle;
  bundle.provider_id = provider->id();
  bundle.dim = provider->dim();
  bundle.seed = ctx.cfg.seed;
  bundle.config = ctx.cfg.train;
  for (FixCategory cat : category_args(a.categories)) {
    const std::string id(category_id(cat));
    TrainingPool pool;
    try {
      pool = augment_training_pool(corpus, cat, ctx.seed("augment/" + id));
    } catch (const Error& e) {
      ctx.err << fmt::format("skipping {}: {}\n", category_display_name(cat), e.what());
      continue;
    }
    LabeledVectors data;
    for (std::size_t i = 0; i < pool.records.size(); ++i) {
      data.x.push_back(embedder(pool.records[i].flaky_code));
      data.y.push_back(pool.positive[i] ? 1 : 0);
    }
    TrainConfig tc = ctx.cfg.train;
    tc.seed = ctx.seed("train/" + id);
    CategoryModel model;
    model.category = cat;
    model.method = ctx.cfg.method;
    std::string detail;
    if (ctx.cfg.method == "fnn") {
      FnnClassifier clf(tc);
      clf.fit(data, {});
      model.fnn = clf.trained().head;
      detail = fmt::format("final loss {:.6f}", clf.trained().loss_trace.back());
    } else {
      FslClassifier clf(tc);
      clf.fit(data, {});
      model.projection = clf.trained().head;
      model.support = clf.support();
      detail = fmt::format("final loss {:.6f}, support {}+{}", clf.trained().loss_trace.back(),
                           clf.support().positive.size(), clf.support().negative.size());
    }
    const auto positives = std::count(data.y.begin(), data.y.end(), 1);
    ctx.out << fmt::format("{}: {} on {} records ({} positive), {}\n", category_display_name(cat), ctx.cfg.method,
                           data.y.size(), positives, detail);
    bundle.models.push_back(std::move(model));
  }
  if (bundle.models.empty()) throw Error("no category had both classes present; nothing trained");
  ctx.output(a.out, model_to_json(bundle));
}

struct ClassifyArgs {
  std::string corpus, model, out;
};

void cmd_classify(Context& ctx, const ClassifyArgs& a) {
  const Corpus corpus = read_corpus(ctx, a.corpus);
  auto provider = make_provider(ctx.cfg);
  ctx.input(a.model);
  const ModelBundle bundle = load_model(a.model, provider->id(), provider->dim());
  Embedder embedder(*provider, ctx.cfg.max_tokens);
  Corpus labeled = corpus;
  std::map<FixCategory, std::size_t> counts;
  for (auto& rec : labeled) {
    const Vec x = embedder(rec.flaky_code);
    std::vector<FixCategory> predicted;
    for (const auto& m : bundle.models) {
      if (m.category != FixCategory::Miscellaneous && m.predict(x) == 1) predicted.push_back(m.category);
    }
    rec.known_labels = predicted.empty() ? LabelSet::miscellaneous() : LabelSet::from(predicted);
    for (FixCategory c : rec.known_labels->categories()) ++counts[c];
  }
  write_corpus(ctx, labeled, a.out);
  ctx.out << "Predicted fix category counts:\n";
  for (FixCategory c : kAllCategories) ctx.out << fmt::format("  {:<22} {}\n", category_display_name(c), counts[c]);
}

struct CrossvalArgs {
  std::string corpus, out, method;
  std::vector<std::string> categories;
  std::size_t folds = 4;
  std::optional<std::size_t> epochs;
  std::optional<double> learning_rate;
};

void cmd_crossval(Context& ctx, const CrossvalArgs& a) {
  apply_train_overrides(ctx, a.method, a.epochs, a.learning_rate);
  const Corpus all = read_corpus(ctx, a.corpus);
  Corpus corpus;
  for (const auto& r : all) {
    if (r.known_labels) corpus.push_back(r);
  }
  auto provider = make_provider(ctx.cfg);
  Embedder embedder(*provider, ctx.cfg.max_tokens);
  std::string csv_out = "category,method,fold,tp,fp,tn,fn,precision,recall,f1\n";
  ctx.out << fmt::format("{:<22} {:>9} {:>9} {:>9}\n", "Category", "Precision", "Recall", "F1");
  for (FixCategory cat : category_args(a.categories)) {
    const std::string id(category_id(cat));
    LabeledVectors data;
    for (const auto& r : corpus) {
      data.x.push_back(embedder(r.flaky_code));
      data.y.push_back(in_class(r, cat) ? 1 : 0);
    }
    const auto pos = static_cast<std::size_t>(std::count(data.y.begin(), data.y.end(), 1));
    if (pos < a.folds || data.y.size() - pos < a.folds) {
      ctx.err << fmt::format("skipping {}: {} positive / {} negative records, {} folds need more\n",
                             category_display_name(cat), pos, data.y.size() - pos, a.folds);
      continue;
    }
    const std::uint64_t aug_seed = ctx.seed("crossval-augment/" + id);
    const std::uint64_t train_seed = ctx.seed("crossval-train/" + id);
    auto extra = [&](std::size_t i) {
      const auto copy = augment_record(corpus[i], derive_seed(aug_seed, corpus[i].id));
      return std::vector<Vec>{embedder(copy.flaky_code)};
    };
    auto factory = [&](std::size_t fold) {
      TrainConfig tc = ctx.cfg.train;
      tc.seed = derive_seed(train_seed, std::to_string(fold));
      return make_classifier(ctx.cfg.method, tc);
    };
    const auto rep = crossval_report(data, factory, a.folds, 0.3, ctx.seed("crossval-folds/" + id), extra);
    auto row = [&](const std::string& fold, const ConfusionCounts& c, const ClassifierMetrics& m) {
      csv_out += fmt::format("{},{},{},{},{},{},{},{:.6f},{:.6f},{:.6f}\n", id, ctx.cfg.method, fold, c.tp, c.fp, c.tn,
                             c.fn, m.precision, m.recall, m.f1);
    };
    for (std::size_t f = 0; f < rep.folds.size(); ++f) row(std::to_string(f + 1), rep.folds[f].counts, rep.folds[f].metrics);
    row("all", rep.pooled, rep.aggregate);
    ctx.out << fmt::format("{:<22} {:>9.2f} {:>9.2f} {:>9.2f}\n", category_display_name(cat), rep.aggregate.precision * 100,
                           rep.aggregate.recall * 100, rep.aggregate.f1 * 100);
  }
  if (!a.out.empty()) ctx.output(a.out, csv_out);
}

struct RepairArgs {
  std::string corpus, out, kind, model, replay_dir, record_dir, endpoint;
  std::optional<std::size_t> examples, concurrency;
  std::optional<double> temperature;
};

void cmd_repair(Context& ctx, const RepairArgs& a) {
  const auto kind = parse_prompt_kind(a.kind);
  if (!kind) throw UsageError("--kind must be bare, labeled or incontext");
  if (!a.model.empty()) ctx.cfg.repair.model = a.model;
  if (!a.endpoint.empty()) ctx.cfg.endpoint = a.endpoint;
  if (a.examples) ctx.cfg.incontext_examples = *a.examples;
  if (a.concurrency) ctx.cfg.repair.concurrency = *a.concurrency;
  if (a.temperature) ctx.cfg.repair.temperature = *a.temperature;
  ctx.cfg.validate();
  if (!a.replay_dir.empty() && !a.record_dir.empty()) throw UsageError("--record-replay and --record are exclusive");
  const Corpus corpus = read_corpus(ctx, a.corpus);

  std::optional<IncontextPlan> plan;
  if (*kind == PromptKind::InContext) {
    plan = plan_incontext(corpus, ctx.cfg.incontext_examples, ctx.seed("incontext"));
    nlohmann::json j = {{"excluded_ids", plan->excluded_ids}};
    for (const auto& [cat, exs] : plan->examples) {
      std::vector<std::string> ids;
      for (const auto& e : exs) ids.push_back(e.record_id);
      j["examples"][std::string(category_id(cat))] = ids;
    }
    for (FixCategory c : plan->skipped) j["skipped"].push_back(std::string(category_id(c)));
    ctx.output(a.out + ".examples.json", j.dump(1));
  }
  const auto jobs = make_jobs(corpus, *kind, plan ? &*plan : nullptr);

  std::unique_ptr<ChatTransport> base;
  std::optional<RecordingTransport> recorder;
  Sleeper sleeper = real_sleeper();
  std::optional<TokenBucket> limiter;
  if (!a.replay_dir.empty()) {
    base = std::make_unique<ReplayTransport>(a.replay_dir);
  } else {
    const std::string key = env_or_empty("FLAKYFIX_API_KEY");
    if (key.empty()) throw UsageError("FLAKYFIX_API_KEY is not set (or use --record-replay <dir> for offline replay)");
    const std::string endpoint = ctx.cfg.endpoint;
    const auto timeout = std::chrono::milliseconds(ctx.cfg.request_timeout_ms);
    base = std::make_unique<HttpChatTransport>([endpoint, timeout] { return make_http_client(endpoint, timeout); }, key);
    limiter.emplace(ctx.cfg.repair.rate_per_second, ctx.cfg.repair.burst);
    if (!a.record_dir.empty()) recorder.emplace(*base, a.record_dir);
  }
  ChatTransport& transport = recorder ? static_cast<ChatTransport&>(*recorder) : *base;
  const auto batch = run_repairs(jobs, transport, ctx.cfg.repair, sleeper, limiter ? &*limiter : nullptr);
  ctx.output(a.out, results_to_jsonl(batch.results));
  ctx.out << fmt::format("{} prompts: {} repaired, {} failed", jobs.size(), batch.results.size(), batch.failures.size());
  if (plan) ctx.out << fmt::format(" ({} records held out as examples)", plan->excluded_ids.size());
  ctx.out << "\n";
  for (const auto& f : batch.failures) ctx.err << f.message << "\n";
  if (!batch.failures.empty()) throw Error(fmt::format("{} repairs failed; first: {}", batch.failures.size(),
                                                      batch.failures.front().message));
}

struct ScoreArgs {
  std::vector<std::string> results;
  std::string corpus, out, summary;
};

void cmd_score(Context& ctx, const ScoreArgs& a) {
  const Corpus corpus = read_corpus(ctx, a.corpus);
  std::vector<RepairResult> results;
  for (const auto& path : a.results) {
    ctx.input(path);
    auto r = load_results(path);
    results.insert(results.end(), r.begin(), r.end());
  }
  const auto rows = score_results(results, corpus, ctx.cfg.metrics);
  ctx.output(a.out, scores_to_csv(rows));
  const auto summary = render_summary(summarize_scores(rows));
  ctx.output(a.summary.empty() ? a.out + ".summary.csv" : a.summary, summary);
  ctx.out << fmt::format("Scored {} results\n", rows.size()) << summary;
}

struct EstimateArgs {
  std::string scores, out;
  std::optional<std::size_t> iterations;
  std::optional<double> level;
};

void cmd_estimate(Context& ctx, const EstimateArgs& a) {
  if (a.iterations) ctx.cfg.bootstrap_iterations = *a.iterations;
  if (a.level) ctx.cfg.level = *a.level;
  ctx.cfg.validate();
  ctx.input(a.scores);
  const auto rows = load_scores(a.scores);
  // The bootstrap draws straight from the top-level seed.
  ctx.manifest.seeds["bootstrap"] = ctx.cfg.seed;
  const auto e = estimate_pass_rates(rows, ctx.cfg.bootstrap_iterations, ctx.cfg.seed, ctx.cfg.level);
  const auto text = render_estimate(e);
  ctx.output(a.out + ".json", estimate_to_json(e));
  ctx.output(a.out + ".csv", projection_csv(e));
  ctx.output(a.out + ".txt", text);
  ctx.out << text;
}

struct ReportArgs {
  std::vector<std::string> scores;
  std::string estimate, out;
};

void cmd_report(Context& ctx, const ReportArgs& a) {
  std::vector<ScoreRow> rows;
  for (const auto& path : a.scores) {
    ctx.input(path);
    auto r = load_scores(path);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  std::optional<Estimate> est;
  if (!a.estimate.empty()) {
    ctx.input(a.estimate);
    est = estimate_from_json(read_text_file(a.estimate));
  }
  const auto text = render_report(build_report(rows, est));
  if (a.out.empty()) ctx.out << text;
  else ctx.output(a.out, text);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fix-category labeling, category-aware repair prompting and repair evaluation for flaky tests",
               "flakyfix"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);
  std::string config_path, manifest_path;
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "Top-level random seed (default 42)");
  app.add_option("--manifest", manifest_path, "Run manifest path (default <out>.manifest.json)");
  app.set_version_flag("--version", std::string(tool_version()));

  LabelArgs label;
  auto* s_label = app.add_subcommand("label", "Label fixed records with fix categories from their diffs");
  s_label->add_option("--corpus", label.corpus, "Input corpus (.jsonl or .csv)")->required();
  s_label->add_option("--out", label.out, "Labeled corpus output")->required();
  s_label->add_option("--rules", label.rules, "Rule table (JSON); defaults to the bundled table");
  s_label->add_option("--min-literal-length", label.min_literal_length, "Minimum literal length for format changes");
  s_label->add_flag("--explain", label.explain, "Print the rules and tokens behind each label");
  s_label->add_flag("--evaluate", label.evaluate, "Compare against the corpus's existing labels");

  AugmentArgs augment;
  auto* s_augment = app.add_subcommand("augment", "Build an augmented training pool for one category");
  s_augment->add_option("--corpus", augment.corpus, "Labeled corpus")->required();
  s_augment->add_option("--category", augment.category, "Fix category")->required();
  s_augment->add_option("--out", augment.out, "Pool output")->required();

  TrainArgs train;
  auto* s_train = app.add_subcommand("train", "Train per-category classifiers");
  s_train->add_option("--corpus", train.corpus, "Labeled corpus")->required();
  s_train->add_option("--out", train.out, "Model file output")->required();
  s_train->add_option("--method", train.method, "fsl or fnn")->check(CLI::IsMember({"fsl", "fnn"}));
  s_train->add_option("--category", train.categories, "Restrict to these categories (repeatable)");
  s_train->add_option("--epochs", train.epochs, "Training epochs");
  s_train->add_option("--learning-rate", train.learning_rate, "AdamW learning rate");

  ClassifyArgs classify;
  auto* s_classify = app.add_subcommand("classify", "Predict fix categories for records");
  s_classify->add_option("--corpus", classify.corpus, "Corpus to classify")->required();
  s_classify->add_option("--model", classify.model, "Model file from train")->required();
  s_classify->add_option("--out", classify.out, "Corpus output with predicted labels")->required();

  CrossvalArgs crossval;
  auto* s_crossval = app.add_subcommand("crossval", "Stratified k-fold evaluation of a classifier");
  s_crossval->add_option("--corpus", crossval.corpus, "Labeled corpus")->required();
  s_crossval->add_option("--out", crossval.out, "Per-fold CSV output");
  s_crossval->add_option("--method", crossval.method, "fsl or fnn")->check(CLI::IsMember({"fsl", "fnn"}));
  s_crossval->add_option("--category", crossval.categories, "Restrict to these categories (repeatable)");
  s_crossval->add_option("--folds", crossval.folds, "Number of folds")->check(CLI::Range(2, 100));
  s_crossval->add_option("--epochs", crossval.epochs, "Training epochs");
  s_crossval->add_option("--learning-rate", crossval.learning_rate, "AdamW learning rate");

  RepairArgs repair;
  auto* s_repair = app.add_subcommand("repair", "Ask an LLM to repair each flaky test");
  s_repair->add_option("--corpus", repair.corpus, "Corpus with labels")->required();
  s_repair->add_option("--kind", repair.kind, "bare, labeled or incontext")->required();
  s_repair->add_option("--out", repair.out, "Results output (.jsonl)")->required();
  s_repair->add_option("--model", repair.model, "Chat model id");
  s_repair->add_option("--endpoint", repair.endpoint, "Base URL of the chat completions API");
  s_repair->add_option("--record-replay", repair.replay_dir, "Replay recorded responses from this directory");
  s_repair->add_option("--record", repair.record_dir, "Record live responses into this directory");
  s_repair->add_option("--examples", repair.examples, "In-context examples per category");
  s_repair->add_option("--concurrency", repair.concurrency, "Concurrent requests");
  s_repair->add_option("--temperature", repair.temperature, "Sampling temperature");

  ScoreArgs score;
  auto* s_score = app.add_subcommand("score", "Score repairs against developer fixes");
  s_score->add_option("--results", score.results, "Repair results (.jsonl, repeatable)")->required();
  s_score->add_option("--corpus", score.corpus, "Corpus holding the developer fixes")->required();
  s_score->add_option("--out", score.out, "Per-record scores CSV")->required();
  s_score->add_option("--summary", score.summary, "Per-category summary CSV (default <out>.summary.csv)");

  EstimateArgs estimate;
  auto* s_estimate = app.add_subcommand("estimate", "Pass-rate interval, logistic model and pass projections");
  s_estimate->add_option("--scores", estimate.scores, "Scores CSV with an outcome column")->required();
  s_estimate->add_option("--out", estimate.out, "Output prefix (.json, .csv, .txt)")->required();
  s_estimate->add_option("--iterations", estimate.iterations, "Bootstrap resamples");
  s_estimate->add_option("--level", estimate.level, "Confidence level");

  ReportArgs report;
  auto* s_report = app.add_subcommand("report", "Per-category comparison of prompt kinds");
  s_report->add_option("--scores", report.scores, "Scores CSV (repeatable)")->required();
  s_report->add_option("--estimate", report.estimate, "Estimate JSON for pass projections");
  s_report->add_option("--out", report.out, "Markdown output (default stdout)");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  std::string main_out;
  if (command == "label") main_out = label.out;
  else if (command == "augment") main_out = augment.out;
  else if (command == "train") main_out = train.out;
  else if (command == "classify") main_out = classify.out;
  else if (command == "crossval") main_out = crossval.out;
  else if (command == "repair") main_out = repair.out;
  else if (command == "score") main_out = score.out;
  else if (command == "estimate") main_out = estimate.out;
  else if (command == "report") main_out = report.out;
  if (manifest_path.empty()) {
    manifest_path = main_out.empty() ? "flakyfix-" + command + ".manifest.json" : main_out + ".manifest.json";
  }

  Context ctx{Config{}, RunManifest{}, out, err};
  ctx.manifest.command = command;
  ctx.manifest.arguments = args;
  ctx.manifest.version = std::string(tool_version());
  ctx.manifest.started_at = utc_timestamp();
  int code = 0;
  try {
    if (!config_path.empty()) {
      ctx.input(config_path);
      ctx.cfg = Config::load(config_path);
    }
    if (seed) ctx.cfg.seed = *seed;
    ctx.manifest.seeds["seed"] = ctx.cfg.seed;
    if (command == "label") cmd_label(ctx, label);
    else if (command == "augment") cmd_augment(ctx, augment);
    else if (command == "train") cmd_train(ctx, train);
    else if (command == "classify") cmd_classify(ctx, classify);
    else if (command == "crossval") cmd_crossval(ctx, crossval);
    else if (command == "repair") cmd_repair(ctx, repair);
    else if (command == "score") cmd_score(ctx, score);
    else if (command == "estimate") cmd_estimate(ctx, estimate);
    else cmd_report(ctx, report);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << sub->help();
    code = 2;
    ctx.manifest.error = e.what();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    code = 1;
    ctx.manifest.error = e.what();
  }
  ctx.manifest.config_json = ctx.cfg.to_json();
  ctx.manifest.exit_code = code;
  ctx.manifest.finished_at = utc_timestamp();
  try {
    write_manifest(ctx.manifest, manifest_path);
  } catch (const std::exception& e) {
    err << "error: cannot write manifest: " << e.what() << "\n";
    if (code == 0) code = 1;
  }
  return code;
}

}  // namespace flakyfix

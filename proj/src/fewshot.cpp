#include "flakyfix/fewshot.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

#include <json.hpp>
#include <openssl/evp.h>

#include "flakyfix/augment.hpp"
#include "flakyfix/error.hpp"
#include "flakyfix/random.hpp"

namespace flakyfix {
namespace {

using nlohmann::json;

template <typename T>
T pick(const std::vector<T>& v, Rng& rng) {
  return v[uniform_index(rng, v.size())];
}

// Draws `count` items, without replacement while the pool lasts.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t count, Rng& rng) {
  std::vector<std::size_t> out;
  while (out.size() < count) {
    shuffle(pool, rng);
    for (std::size_t i = 0; i < pool.size() && out.size() < count; ++i) out.push_back(pool[i]);
  }
  return out;
}

double mean_triplet_loss(const ProjectionHead& head, const std::vector<VecTriplet>& ts, double margin) {
  double sum = 0;
  for (const auto& t : ts) {
    sum += triplet_loss(head.forward(t.anchor), head.forward(t.positive), head.forward(t.negative), margin);
  }
  return ts.empty() ? 0.0 : sum / static_cast<double>(ts.size());
}

double mean_cross_entropy(const FnnHead& head, const std::vector<Vec>& x, const std::vector<int>& y) {
  double sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += -std::log(std::max(head.probabilities(x[i])(y[i]), 1e-300));
  }
  return x.empty() ? 0.0 : sum / static_cast<double>(x.size());
}

void check_finite(double loss, const char* what, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    throw Error(std::string(what) + ": non-finite loss at epoch " + std::to_string(epoch + 1) +
                " (try a smaller learning rate)");
  }
}

double cosine(const Vec& a, const Vec& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) throw Error("cosine similarity of a zero vector");
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

}  // namespace

// --- triplets ------------------------------------------------------------------

TripletSet build_triplets(const Corpus& corpus, FixCategory category, std::size_t per_anchor,
                          std::uint64_t seed) {
  TripletSet out;
  out.pool = corpus;
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const bool p = in_class(corpus[i], category);
    out.positive.push_back(p);
    out.augmented_from.emplace_back();
    (p ? pos : neg).push_back(i);
  }
  const std::string cat(category_id(category));
  if (pos.empty()) throw Error("category " + cat + ": no positive-class records for triplets");
  if (neg.empty()) throw Error("category " + cat + ": no negative-class records for triplets");
  if (per_anchor == 0) throw Error("per_anchor must be at least 1");
  Rng rng(seed);
  for (std::size_t a : pos) {
    std::vector<std::size_t> others;
    for (std::size_t p : pos) {
      if (p != a) others.push_back(p);
    }
    if (others.empty()) {
      out.pool.push_back(augment_record(corpus[a], rng()));
      out.positive.push_back(true);
      out.augmented_from.push_back(corpus[a].id);
      others.push_back(out.pool.size() - 1);
    }
    const auto ps = draw(others, per_anchor, rng);
    const auto ns = draw(neg, per_anchor, rng);
    for (std::size_t k = 0; k < per_anchor; ++k) out.triplets.push_back({a, ps[k], ns[k]});
  }
  return out;
}

std::vector<VecTriplet> vector_triplets(const LabeledVectors& data, std::size_t per_anchor,
                                        std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.y.size(); ++i) (data.y[i] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error("triplets need both classes");
  Rng rng(seed);
  std::vector<VecTriplet> out;
  for (std::size_t a : pos) {
    std::vector<std::size_t> others;
    for (std::size_t p : pos) {
      if (p != a) others.push_back(p);
    }
    // A lone positive can only be its own positive.
    if (others.empty()) others.push_back(a);
    const auto ps = draw(others, per_anchor, rng);
    const auto ns = draw(neg, per_anchor, rng);
    for (std::size_t k = 0; k < per_anchor; ++k) out.push_back({data.x[a], data.x[ps[k]], data.x[ns[k]]});
  }
  return out;
}

// --- training --------------------------------------------------------------------

void TrainConfig::validate() const {
  if (!(learning_rate > 0)) throw Error("learning_rate must be positive");
  if (!(margin > 0)) throw Error("margin must be positive");
  if (batch_size == 0) throw Error("batch_size must be at least 1");
  if (!(dropout >= 0 && dropout < 1)) throw Error("dropout must lie in [0, 1)");
  if (projection_dim <= 0 || hidden_dim <= 0) throw Error("layer widths must be positive");
  if (epochs == 0) throw Error("epochs must be at least 1");
}

TrainedProjection train_projection(const std::vector<VecTriplet>& triplets, const TrainConfig& config,
                                   const std::vector<VecTriplet>& validation) {
  config.validate();
  if (triplets.empty()) throw Error("train_projection: no triplets");
  Rng rng(config.seed);
  TrainedProjection out;
  out.head = ProjectionHead::init(triplets.front().anchor.size(), config.projection_dim, config.dropout, rng);
  AdamWConfig opt_cfg = config.optimizer;
  opt_cfg.learning_rate = config.learning_rate;
  AdamW opt(opt_cfg);
  opt.add(&out.head.weight);
  opt.add(&out.head.bias);

  ProjectionHead best = out.head;
  double best_val = INFINITY;
  std::size_t stale = 0;
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      auto g = out.head.zero_grad();
      for (std::size_t i = start; i < end; ++i) {
        const auto& t = triplets[order[i]];
        out.head.triplet_loss_and_grad(t.anchor, t.positive, t.negative, config.margin, g, &rng);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      g.weight *= scale;
      g.bias *= scale;
      opt.step({&g.weight, &g.bias});
    }
    const double loss = mean_triplet_loss(out.head, triplets, config.margin);
    check_finite(loss, "train_projection", epoch);
    out.loss_trace.push_back(loss);
    if (validation.empty()) continue;
    const double val = mean_triplet_loss(out.head, validation, config.margin);
    check_finite(val, "train_projection (validation)", epoch);
    out.validation_trace.push_back(val);
    if (val < best_val) {
      best_val = val;
      best = out.head;
      out.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= config.patience) {
      out.stopped_early = true;
      break;
    }
  }
  if (!validation.empty()) out.head = best;
  else out.best_epoch = out.loss_trace.size() - 1;
  return out;
}

std::vector<std::size_t> oversample_indices(const std::vector<int>& y, std::uint64_t seed) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty()) throw Error("oversampling needs both classes present");
  std::vector<std::size_t> out(y.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  const auto& minority = pos.size() < neg.size() ? pos : neg;
  const std::size_t gap = std::max(pos.size(), neg.size()) - minority.size();
  Rng rng(seed);
  for (std::size_t i = 0; i < gap; ++i) out.push_back(pick(minority, rng));
  return out;
}

TrainedFnn train_fnn(const std::vector<Vec>& x, const std::vector<int>& y, const TrainConfig& config,
                     const std::vector<Vec>& val_x, const std::vector<int>& val_y) {
  config.validate();
  if (x.size() != y.size() || x.empty()) throw Error("train_fnn: need paired nonempty data");
  std::vector<std::size_t> order = oversample_indices(y, derive_seed(config.seed, "oversample"));
  Rng rng(config.seed);
  TrainedFnn out;
  for (std::size_t i : order) (y[i] == 1 ? out.oversampled_positive : out.oversampled_negative)++;
  out.head = FnnHead::init(x.front().size(), config.hidden_dim, config.dropout, rng);
  AdamWConfig opt_cfg = config.optimizer;
  opt_cfg.learning_rate = config.learning_rate;
  AdamW opt(opt_cfg);
  opt.add(&out.head.w1);
  opt.add(&out.head.b1);
  opt.add(&out.head.w2);
  opt.add(&out.head.b2);

  FnnHead best = out.head;
  double best_val = INFINITY;
  std::size_t stale = 0;
  const bool use_val = !val_x.empty();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      auto g = out.head.zero_grad();
      for (std::size_t i = start; i < end; ++i) out.head.loss_and_grad(x[order[i]], y[order[i]], g, &rng);
      const double scale = 1.0 / static_cast<double>(end - start);
      g.w1 *= scale;
      g.b1 *= scale;
      g.w2 *= scale;
      g.b2 *= scale;
      opt.step({&g.w1, &g.b1, &g.w2, &g.b2});
    }
    const double loss = mean_cross_entropy(out.head, x, y);
    check_finite(loss, "train_fnn", epoch);
    out.loss_trace.push_back(loss);
    if (!use_val) continue;
    const double val = mean_cross_entropy(out.head, val_x, val_y);
    check_finite(val, "train_fnn (validation)", epoch);
    out.validation_trace.push_back(val);
    if (val < best_val) {
      best_val = val;
      best = out.head;
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
  }
  if (use_val) out.head = best;
  return out;
}

// --- inference -------------------------------------------------------------------

SupportSet build_support_set(const std::vector<Vec>& positives, const std::vector<Vec>& negatives,
                             const ProjectionHead* head, std::size_t k) {
  if (k == 0) throw Error("support set size must be at least 1");
  if (positives.size() < k) throw Error("support set: positive class has fewer than k examples");
  if (negatives.size() < k) throw Error("support set: negative class has fewer than k examples");
  SupportSet s;
  auto project = [&](const std::vector<Vec>& in, std::vector<Vec>& out, Vec& centroid) {
    for (std::size_t i = 0; i < k; ++i) out.push_back(head ? head->forward(in[i]) : in[i]);
    centroid = Vec::Zero(out.front().size());
    for (const auto& v : out) centroid += v;
    centroid /= static_cast<double>(k);
  };
  project(positives, s.positive, s.positive_centroid);
  project(negatives, s.negative, s.negative_centroid);
  return s;
}

Classification classify_query(const Vec& query, const SupportSet& support, const ProjectionHead* head) {
  if (query.norm() == 0) throw Error("classify_query: zero query embedding");
  if (support.positive_centroid.size() == 0 || support.negative_centroid.size() == 0) {
    throw Error("classify_query: support set lacks a centroid");
  }
  const Vec q = head ? head->forward(query) : query;
  Classification c;
  c.positive_score = cosine(q, support.positive_centroid);
  c.negative_score = cosine(q, support.negative_centroid);
  c.positive = c.positive_score > c.negative_score;
  return c;
}

// --- cross-validation ----------------------------------------------------------------

std::vector<Fold> stratified_kfold(const std::vector<bool>& positive, std::size_t k, double val_fraction,
                                   std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be at least 2");
  if (!(val_fraction >= 0 && val_fraction < 1)) throw Error("stratified_kfold: val_fraction must lie in [0, 1)");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < positive.size(); ++i) (positive[i] ? pos : neg).push_back(i);
  if (pos.size() < k || neg.size() < k) {
    throw Error("stratified_kfold: each class needs at least " + std::to_string(k) + " records (positive " +
                std::to_string(pos.size()) + ", negative " + std::to_string(neg.size()) + ")");
  }
  Rng rng(seed);
  shuffle(pos, rng);
  shuffle(neg, rng);
  std::vector<std::size_t> fold_of(positive.size());
  for (std::size_t i = 0; i < pos.size(); ++i) fold_of[pos[i]] = i % k;
  for (std::size_t i = 0; i < neg.size(); ++i) fold_of[neg[i]] = i % k;

  std::vector<Fold> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> rest_pos, rest_neg;
    for (std::size_t i = 0; i < positive.size(); ++i) {
      if (fold_of[i] == f) folds[f].test.push_back(i);
      else (positive[i] ? rest_pos : rest_neg).push_back(i);
    }
    Rng vrng(derive_seed(seed, "validation-" + std::to_string(f)));
    for (auto* cls : {&rest_pos, &rest_neg}) {
      shuffle(*cls, vrng);
      const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(cls->size())));
      for (std::size_t i = 0; i < cls->size(); ++i) {
        (i < n_val ? folds[f].validation : folds[f].train).push_back((*cls)[i]);
      }
    }
    std::sort(folds[f].train.begin(), folds[f].train.end());
    std::sort(folds[f].validation.begin(), folds[f].validation.end());
  }
  return folds;
}

void FslClassifier::fit(const LabeledVectors& train, const LabeledVectors& validation) {
  const auto triplets = vector_triplets(train, config_.per_anchor, derive_seed(config_.seed, "triplets"));
  std::vector<VecTriplet> val;
  const bool val_has_both = std::count(validation.y.begin(), validation.y.end(), 1) > 0 &&
                            std::count(validation.y.begin(), validation.y.end(), 0) > 0;
  if (val_has_both) val = vector_triplets(validation, 1, derive_seed(config_.seed, "val-triplets"));
  trained_ = train_projection(triplets, config_, val);
  std::vector<Vec> pos, neg;
  for (std::size_t i = 0; i < train.x.size(); ++i) (train.y[i] == 1 ? pos : neg).push_back(train.x[i]);
  const std::size_t k = std::min({config_.support_k, pos.size(), neg.size()});
  support_ = build_support_set(pos, neg, &trained_.head, k);
}

int FslClassifier::predict(const Vec& x) const {
  return classify_query(x, support_, &trained_.head).positive ? 1 : 0;
}

void FnnClassifier::fit(const LabeledVectors& train, const LabeledVectors& validation) {
  trained_ = train_fnn(train.x, train.y, config_, validation.x, validation.y);
}

int FnnClassifier::predict(const Vec& x) const { return trained_.head.predict(x); }

CrossvalReport crossval_report(const LabeledVectors& data, const ClassifierFactory& factory, std::size_t k,
                               double val_fraction, std::uint64_t seed,
                               const std::function<std::vector<Vec>(std::size_t)>& extra_training) {
  if (data.x.size() != data.y.size()) throw Error("crossval: vectors and labels differ in length");
  std::vector<bool> positive;
  for (int y : data.y) positive.push_back(y == 1);
  const auto folds = stratified_kfold(positive, k, val_fraction, seed);
  CrossvalReport report;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    LabeledVectors train, val;
    for (std::size_t i : folds[f].train) {
      train.x.push_back(data.x[i]);
      train.y.push_back(data.y[i]);
      if (extra_training) {
        for (auto& v : extra_training(i)) {
          train.x.push_back(std::move(v));
          train.y.push_back(data.y[i]);
        }
      }
    }
    for (std::size_t i : folds[f].validation) {
      val.x.push_back(data.x[i]);
      val.y.push_back(data.y[i]);
    }
    auto clf = factory(f);
    clf->fit(train, val);
    FoldResult r;
    for (std::size_t i : folds[f].test) {
      const int pred = clf->predict(data.x[i]);
      const int truth = data.y[i];
      if (pred == 1 && truth == 1) ++r.counts.tp;
      else if (pred == 1) ++r.counts.fp;
      else if (truth == 1) ++r.counts.fn;
      else ++r.counts.tn;
    }
    r.metrics = precision_recall_f1(r.counts);
    report.pooled += r.counts;
    report.folds.push_back(r);
  }
  report.aggregate = precision_recall_f1(report.pooled);
  return report;
}

// --- model files -------------------------------------------------------------------

int CategoryModel::predict(const Vec& x) const {
  if (method == "fsl") {
    if (!projection || !support) throw Error("fsl model is missing its head or support set");
    return classify_query(x, *support, &*projection).positive ? 1 : 0;
  }
  if (!fnn) throw Error("fnn model is missing its head");
  return fnn->predict(x);
}

namespace {

std::string b64_encode(const Mat& m) {
  const auto bytes = static_cast<int>(m.size() * sizeof(double));
  std::string out(static_cast<std::size_t>(4 * ((bytes + 2) / 3)) + 1, '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                reinterpret_cast<const unsigned char*>(m.data()), bytes);
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Mat b64_decode(const std::string& text, long rows, long cols) {
  std::string buf(3 * text.size() / 4 + 3, '\0');
  const int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(buf.data()),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw Error("model file: corrupt weight encoding");
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  const std::size_t got = static_cast<std::size_t>(n) - pad;
  const std::size_t want = static_cast<std::size_t>(rows * cols) * sizeof(double);
  if (got != want) throw Error("model file: weight block has the wrong size");
  Mat m(rows, cols);
  std::memcpy(m.data(), buf.data(), want);
  return m;
}

json mat_json(const Mat& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"f64le", b64_encode(m)}}; }

Mat mat_from(const json& j) {
  return b64_decode(j.at("f64le").get<std::string>(), j.at("rows").get<long>(), j.at("cols").get<long>());
}

json vec_list(const std::vector<Vec>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(mat_json(v));
  return a;
}

std::vector<Vec> vecs_from(const json& j) {
  std::vector<Vec> out;
  for (const auto& x : j) out.push_back(mat_from(x));
  return out;
}

json config_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
          {"margin", c.margin},               {"epochs", c.epochs},
          {"patience", c.patience},           {"seed", c.seed},
          {"dropout", c.dropout},             {"projection_dim", c.projection_dim},
          {"hidden_dim", c.hidden_dim},       {"per_anchor", c.per_anchor},
          {"support_k", c.support_k},         {"beta1", c.optimizer.beta1},
          {"beta2", c.optimizer.beta2},       {"weight_decay", c.optimizer.weight_decay},
          {"epsilon", c.optimizer.epsilon}};
}

TrainConfig config_from(const json& j) {
  TrainConfig c;
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.margin = j.value("margin", c.margin);
  c.epochs = j.value("epochs", c.epochs);
  c.patience = j.value("patience", c.patience);
  c.seed = j.value("seed", c.seed);
  c.dropout = j.value("dropout", c.dropout);
  c.projection_dim = j.value("projection_dim", c.projection_dim);
  c.hidden_dim = j.value("hidden_dim", c.hidden_dim);
  c.per_anchor = j.value("per_anchor", c.per_anchor);
  c.support_k = j.value("support_k", c.support_k);
  c.optimizer.beta1 = j.value("beta1", c.optimizer.beta1);
  c.optimizer.beta2 = j.value("beta2", c.optimizer.beta2);
  c.optimizer.weight_decay = j.value("weight_decay", c.optimizer.weight_decay);
  c.optimizer.epsilon = j.value("epsilon", c.optimizer.epsilon);
  return c;
}

}  // namespace

std::string model_to_json(const ModelBundle& bundle) {
  json models = json::array();
  for (const auto& m : bundle.models) {
    json jm = {{"category", std::string(category_id(m.category))}, {"method", m.method}};
    if (m.projection) {
      jm["projection"] = {{"weight", mat_json(m.projection->weight)},
                          {"bias", mat_json(m.projection->bias)},
                          {"dropout", m.projection->dropout_rate},
                          {"normalize_output", m.projection->normalize_output}};
    }
    if (m.support) {
      jm["support"] = {{"positive", vec_list(m.support->positive)},
                       {"negative", vec_list(m.support->negative)},
                       {"positive_centroid", mat_json(m.support->positive_centroid)},
                       {"negative_centroid", mat_json(m.support->negative_centroid)}};
    }
    if (m.fnn) {
      jm["fnn"] = {{"w1", mat_json(m.fnn->w1)}, {"b1", mat_json(m.fnn->b1)}, {"w2", mat_json(m.fnn->w2)},
                   {"b2", mat_json(m.fnn->b2)}, {"dropout", m.fnn->dropout_rate}};
    }
    models.push_back(jm);
  }
  const json j = {{"format", "flakyfix-model"}, {"version", bundle.version},
                  {"provider_id", bundle.provider_id}, {"dim", bundle.dim},
                  {"seed", bundle.seed}, {"config", config_json(bundle.config)},
                  {"models", models}};
  return j.dump(1);
}

ModelBundle model_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "flakyfix-model") throw Error("not a flakyfix model file");
    ModelBundle b;
    b.version = j.at("version").get<int>();
    if (b.version != 1) throw Error("unsupported model file version " + std::to_string(b.version));
    b.provider_id = j.at("provider_id").get<std::string>();
    b.dim = j.at("dim").get<std::size_t>();
    b.seed = j.at("seed").get<std::uint64_t>();
    b.config = config_from(j.at("config"));
    for (const auto& jm : j.at("models")) {
      CategoryModel m;
      const auto cat = parse_category(jm.at("category").get<std::string>());
      if (!cat) throw Error("model file: unknown category");
      m.category = *cat;
      m.method = jm.at("method").get<std::string>();
      if (jm.contains("projection")) {
        const auto& p = jm["projection"];
        ProjectionHead h;
        h.weight = mat_from(p.at("weight"));
        h.bias = mat_from(p.at("bias"));
        h.dropout_rate = p.value("dropout", 0.1);
        h.normalize_output = p.value("normalize_output", true);
        m.projection = std::move(h);
      }
      if (jm.contains("support")) {
        const auto& s = jm["support"];
        SupportSet ss;
        ss.positive = vecs_from(s.at("positive"));
        ss.negative = vecs_from(s.at("negative"));
        ss.positive_centroid = mat_from(s.at("positive_centroid"));
        ss.negative_centroid = mat_from(s.at("negative_centroid"));
        m.support = std::move(ss);
      }
      if (jm.contains("fnn")) {
        const auto& f = jm["fnn"];
        FnnHead h;
        h.w1 = mat_from(f.at("w1"));
        h.b1 = mat_from(f.at("b1"));
        h.w2 = mat_from(f.at("w2"));
        h.b2 = mat_from(f.at("b2"));
        h.dropout_rate = f.value("dropout", 0.1);
        m.fnn = std::move(h);
      }
      b.models.push_back(std::move(m));
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
}

void save_model(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file: " + path);
  out << model_to_json(bundle);
}

ModelBundle load_model(const std::string& path, const std::string& provider_id, std::size_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file: " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  ModelBundle b = model_from_json(text);
  if (b.dim != dim) {
    throw Error("model file " + path + " was trained for dim " + std::to_string(b.dim) +
                " but the active provider produces dim " + std::to_string(dim));
  }
  if (b.provider_id != provider_id) {
    throw Error("model file " + path + " was trained with provider " + b.provider_id + ", active provider is " +
                provider_id);
  }
  return b;
}

}  // namespace flakyfix

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flakyfix/category.hpp"
#include "flakyfix/corpus.hpp"
#include "flakyfix/nn.hpp"
#include "flakyfix/stats.hpp"

namespace flakyfix {

// --- triplets ------------------------------------------------------------------

struct Triplet {
  std::size_t anchor, positive, negative;  // indices into TripletSet::pool
};

struct TripletSet {
  Corpus pool;                              // input records, then synthesized ones
  std::vector<bool> positive;               // class membership per pool record
  std::vector<std::string> augmented_from;  // empty for input records
  std::vector<Triplet> triplets;
};

/// Every positive-class record anchors `per_anchor` triplets. Positives are
/// other positive-class records; when an anchor has none, a label-preserving
/// augmentation of the anchor is added to the pool. Throws when a class is
/// empty.
TripletSet build_triplets(const Corpus& corpus, FixCategory category, std::size_t per_anchor,
                          std::uint64_t seed);

struct VecTriplet {
  Vec anchor, positive, negative;
};

// --- training --------------------------------------------------------------------

struct TrainConfig {
  double learning_rate = 1e-5;
  std::size_t batch_size = 2;
  double margin = 0.2;
  std::size_t epochs = 50;
  std::size_t patience = 5;  // non-improving validation epochs before stopping
  std::uint64_t seed = 42;
  double dropout = 0.1;
  long projection_dim = 512;
  long hidden_dim = 512;
  std::size_t per_anchor = 2;
  std::size_t support_k = 10;
  AdamWConfig optimizer;  // learning_rate here is overwritten by the field above

  void validate() const;
};

struct TrainedProjection {
  ProjectionHead head;
  std::vector<double> loss_trace;  // mean training loss per epoch, eval mode
  std::vector<double> validation_trace;
  std::size_t best_epoch = 0;
  bool stopped_early = false;
};

/// Mini-batch AdamW on the triplet loss. With validation triplets, training
/// stops after `patience` epochs without improvement and the best weights
/// are kept. Throws on empty input or a non-finite loss.
TrainedProjection train_projection(const std::vector<VecTriplet>& triplets, const TrainConfig& config,
                                   const std::vector<VecTriplet>& validation = {});

struct TrainedFnn {
  FnnHead head;
  std::vector<double> loss_trace;
  std::vector<double> validation_trace;
  std::size_t oversampled_positive = 0;
  std::size_t oversampled_negative = 0;
};

/// Duplicates random minority examples up to parity, then trains with
/// cross-entropy. Labels are 1 (positive) / 0. Throws on single-class input.
TrainedFnn train_fnn(const std::vector<Vec>& x, const std::vector<int>& y, const TrainConfig& config,
                     const std::vector<Vec>& val_x = {}, const std::vector<int>& val_y = {});

/// Indices of the balanced training set (originals plus duplicates).
std::vector<std::size_t> oversample_indices(const std::vector<int>& y, std::uint64_t seed);

// --- inference -------------------------------------------------------------------

struct SupportSet {
  std::vector<Vec> positive, negative;  // projected examples
  Vec positive_centroid, negative_centroid;
};

/// Projects the first k examples of each class (identity when head is null)
/// and averages them. Throws when a class has fewer than k examples.
SupportSet build_support_set(const std::vector<Vec>& positives, const std::vector<Vec>& negatives,
                             const ProjectionHead* head, std::size_t k);

struct Classification {
  bool positive = false;
  double positive_score = 0, negative_score = 0;  // cosine to each centroid
};

/// Nearest centroid by cosine similarity; ties go to the negative class.
Classification classify_query(const Vec& query, const SupportSet& support, const ProjectionHead* head);

// --- cross-validation ----------------------------------------------------------------

struct Fold {
  std::vector<std::size_t> train, validation, test;
};

/// Stratified k-fold: each class is shuffled with the seed and dealt round
/// robin; the validation split is a stratified `val_fraction` of the fold's
/// training portion. Throws when a class has fewer than k members.
std::vector<Fold> stratified_kfold(const std::vector<bool>& positive, std::size_t k = 4,
                                   double val_fraction = 0.3, std::uint64_t seed = 42);

struct LabeledVectors {
  std::vector<Vec> x;
  std::vector<int> y;
};

class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;
  virtual void fit(const LabeledVectors& train, const LabeledVectors& validation) = 0;
  virtual int predict(const Vec& x) const = 0;
};

using ClassifierFactory = std::function<std::unique_ptr<BinaryClassifier>(std::size_t fold)>;

// Projection head + nearest centroid. Triplets are drawn from the training
// vectors (anchors: positives; positives: other positives; negatives: random
// negatives).
class FslClassifier final : public BinaryClassifier {
 public:
  explicit FslClassifier(TrainConfig config) : config_(std::move(config)) {}
  void fit(const LabeledVectors& train, const LabeledVectors& validation) override;
  int predict(const Vec& x) const override;
  const TrainedProjection& trained() const { return trained_; }
  const SupportSet& support() const { return support_; }

 private:
  TrainConfig config_;
  TrainedProjection trained_;
  SupportSet support_;
};

class FnnClassifier final : public BinaryClassifier {
 public:
  explicit FnnClassifier(TrainConfig config) : config_(std::move(config)) {}
  void fit(const LabeledVectors& train, const LabeledVectors& validation) override;
  int predict(const Vec& x) const override;
  const TrainedFnn& trained() const { return trained_; }

 private:
  TrainConfig config_;
  TrainedFnn trained_;
};

std::vector<VecTriplet> vector_triplets(const LabeledVectors& data, std::size_t per_anchor,
                                        std::uint64_t seed);

struct FoldResult {
  ConfusionCounts counts;
  ClassifierMetrics metrics;
};

struct CrossvalReport {
  std::vector<FoldResult> folds;
  ConfusionCounts pooled;
  ClassifierMetrics aggregate;  // from the pooled counts
};

/// `extra_training(i)` may return additional same-label vectors for record i
/// (augmentations); they join the training side of a fold only.
CrossvalReport crossval_report(const LabeledVectors& data, const ClassifierFactory& factory,
                               std::size_t k = 4, double val_fraction = 0.3, std::uint64_t seed = 42,
                               const std::function<std::vector<Vec>(std::size_t)>& extra_training = {});

// --- model files -------------------------------------------------------------------

struct CategoryModel {
  FixCategory category = FixCategory::ChangeAssertion;
  std::string method;  // "fsl" or "fnn"
  std::optional<ProjectionHead> projection;
  std::optional<SupportSet> support;
  std::optional<FnnHead> fnn;

  /// 1 when the query belongs to the category.
  int predict(const Vec& x) const;
};

struct ModelBundle {
  int version = 1;
  std::string provider_id;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  TrainConfig config;
  std::vector<CategoryModel> models;
};

std::string model_to_json(const ModelBundle& bundle);
ModelBundle model_from_json(const std::string& text);
void save_model(const ModelBundle& bundle, const std::string& path);
/// Refuses a bundle whose dim or provider differs from the active provider.
ModelBundle load_model(const std::string& path, const std::string& provider_id, std::size_t dim);

}  // namespace flakyfix

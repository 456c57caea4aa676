#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flakyfix/random.hpp"

namespace flakyfix {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct AdamWConfig {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.01;
  double epsilon = 1e-8;
};

// Decoupled weight decay: p <- p - lr * (m_hat / (sqrt(v_hat) + eps) + wd * p).
class AdamW {
 public:
  explicit AdamW(AdamWConfig config = {}) : config_(config) {}

  /// Registers parameter blocks once, in a fixed order.
  void add(Mat* param);
  /// Applies one update; `grads` must match the registered blocks in order.
  void step(const std::vector<const Mat*>& grads);
  long steps() const { return t_; }
  const AdamWConfig& config() const { return config_; }

 private:
  AdamWConfig config_;
  std::vector<Mat*> params_;
  std::vector<Mat> m_, v_;
  long t_ = 0;
};

double squared_distance(const Vec& a, const Vec& b);

/// max(0, d(a,p) - d(a,n) + margin) with d the squared Euclidean distance.
double triplet_loss(const Vec& a, const Vec& p, const Vec& n, double margin);

// Linear map to `out_dim` followed by L2 normalization (when enabled).
// Dropout acts on the input and only in training mode.
struct ProjectionHead {
  Mat weight;  // out_dim x in_dim
  Mat bias;    // out_dim x 1
  double dropout_rate = 0.1;
  bool normalize_output = true;

  static ProjectionHead init(long in_dim, long out_dim, double dropout_rate, Rng& rng);

  long in_dim() const { return weight.cols(); }
  long out_dim() const { return weight.rows(); }
  Vec forward(const Vec& x) const;  // eval mode

  struct Grad {
    Mat weight, bias;
  };
  /// Loss of one triplet and its gradient (accumulated into `g`). With `rng`
  /// null the pass runs in eval mode, otherwise dropout masks come from it.
  double triplet_loss_and_grad(const Vec& a, const Vec& p, const Vec& n, double margin, Grad& g,
                               Rng* rng = nullptr) const;
  Grad zero_grad() const;
};

// in -> hidden (ReLU, dropout) -> 2-way softmax.
struct FnnHead {
  Mat w1, b1;  // hidden x in, hidden x 1
  Mat w2, b2;  // 2 x hidden, 2 x 1
  double dropout_rate = 0.1;

  static FnnHead init(long in_dim, long hidden, double dropout_rate, Rng& rng);

  long in_dim() const { return w1.cols(); }
  Vec probabilities(const Vec& x) const;  // eval mode; sums to 1
  int predict(const Vec& x) const;        // 1 = positive class

  struct Grad {
    Mat w1, b1, w2, b2;
  };
  /// Cross-entropy of one labeled example and its gradient (accumulated).
  double loss_and_grad(const Vec& x, int label, Grad& g, Rng* rng = nullptr) const;
  Grad zero_grad() const;
};

Vec softmax(const Vec& logits);

}  // namespace flakyfix

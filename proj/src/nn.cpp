#include "flakyfix/nn.hpp"

#include <cmath>

#include "flakyfix/error.hpp"

namespace flakyfix {
namespace {

Mat xavier(long rows, long cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Mat m(rows, cols);
  for (long j = 0; j < cols; ++j) {
    for (long i = 0; i < rows; ++i) m(i, j) = uniform_real(rng, -a, a);
  }
  return m;
}

// Inverted dropout mask; all ones when rng is null (eval mode).
Vec dropout_mask(long n, double rate, Rng* rng) {
  Vec mask = Vec::Ones(n);
  if (!rng || rate <= 0.0) return mask;
  const double keep = 1.0 - rate;
  for (long i = 0; i < n; ++i) mask(i) = uniform_real(*rng) < keep ? 1.0 / keep : 0.0;
  return mask;
}

}  // namespace

void AdamW::add(Mat* param) {
  params_.push_back(param);
  m_.push_back(Mat::Zero(param->rows(), param->cols()));
  v_.push_back(Mat::Zero(param->rows(), param->cols()));
}

void AdamW::step(const std::vector<const Mat*>& grads) {
  if (grads.size() != params_.size()) throw Error("AdamW: gradient/parameter count mismatch");
  ++t_;
  const auto& c = config_;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Mat& p = *params_[k];
    const Mat& g = *grads[k];
    m_[k] = c.beta1 * m_[k] + (1.0 - c.beta1) * g;
    v_[k] = c.beta2 * v_[k] + (1.0 - c.beta2) * g.cwiseProduct(g);
    const Mat m_hat = m_[k] / bc1;
    const Mat v_hat = v_[k] / bc2;
    const Mat adam = m_hat.array() / (v_hat.array().sqrt() + c.epsilon);
    p = p - c.learning_rate * (adam + c.weight_decay * p);
  }
}

double squared_distance(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error("dimension mismatch");
  return (a - b).squaredNorm();
}

double triplet_loss(const Vec& a, const Vec& p, const Vec& n, double margin) {
  if (a.size() != p.size() || a.size() != n.size()) throw Error("triplet_loss: dimension mismatch");
  return std::max(0.0, squared_distance(a, p) - squared_distance(a, n) + margin);
}

ProjectionHead ProjectionHead::init(long in_dim, long out_dim, double dropout_rate, Rng& rng) {
  ProjectionHead h;
  h.weight = xavier(out_dim, in_dim, rng);
  h.bias = Mat::Zero(out_dim, 1);
  h.dropout_rate = dropout_rate;
  return h;
}

Vec ProjectionHead::forward(const Vec& x) const {
  if (x.size() != in_dim()) throw Error("projection: input dimension mismatch");
  Vec y = weight * x + bias.col(0);
  if (normalize_output) {
    const double r = y.norm();
    if (r > 0) y /= r;
  }
  return y;
}

ProjectionHead::Grad ProjectionHead::zero_grad() const {
  return {Mat::Zero(weight.rows(), weight.cols()), Mat::Zero(bias.rows(), 1)};
}

double ProjectionHead::triplet_loss_and_grad(const Vec& a, const Vec& p, const Vec& n,
                                             double margin, Grad& g, Rng* rng) const {
  struct Pass {
    Vec x, y, z;
    double r = 1.0;
  };
  auto run = [&](const Vec& in) {
    if (in.size() != in_dim()) throw Error("projection: input dimension mismatch");
    Pass s;
    s.x = in.cwiseProduct(dropout_mask(in.size(), dropout_rate, rng));
    s.y = weight * s.x + bias.col(0);
    s.r = normalize_output ? s.y.norm() : 1.0;
    if (s.r <= 0) s.r = 1.0;
    s.z = s.y / s.r;
    return s;
  };
  const Pass pa = run(a), pp = run(p), pn = run(n);
  const double loss = (pa.z - pp.z).squaredNorm() - (pa.z - pn.z).squaredNorm() + margin;
  if (loss <= 0) return 0.0;
  auto back = [&](const Pass& s, const Vec& dz) {
    Vec dy = dz;
    if (normalize_output) dy = (dz - s.z * s.z.dot(dz)) / s.r;
    g.weight += dy * s.x.transpose();
    g.bias.col(0) += dy;
  };
  back(pa, 2.0 * (pn.z - pp.z));
  back(pp, -2.0 * (pa.z - pp.z));
  back(pn, 2.0 * (pa.z - pn.z));
  return loss;
}

Vec softmax(const Vec& logits) {
  const double mx = logits.maxCoeff();
  Vec e = (logits.array() - mx).exp();
  return e / e.sum();
}

FnnHead FnnHead::init(long in_dim, long hidden, double dropout_rate, Rng& rng) {
  FnnHead h;
  h.w1 = xavier(hidden, in_dim, rng);
  h.b1 = Mat::Zero(hidden, 1);
  h.w2 = xavier(2, hidden, rng);
  h.b2 = Mat::Zero(2, 1);
  h.dropout_rate = dropout_rate;
  return h;
}

Vec FnnHead::probabilities(const Vec& x) const {
  if (x.size() != in_dim()) throw Error("fnn: input dimension mismatch");
  const Vec h = (w1 * x + b1.col(0)).cwiseMax(0.0);
  return softmax(w2 * h + b2.col(0));
}

int FnnHead::predict(const Vec& x) const {
  const Vec p = probabilities(x);
  return p(1) > p(0) ? 1 : 0;
}

FnnHead::Grad FnnHead::zero_grad() const {
  return {Mat::Zero(w1.rows(), w1.cols()), Mat::Zero(b1.rows(), 1), Mat::Zero(w2.rows(), w2.cols()),
          Mat::Zero(2, 1)};
}

double FnnHead::loss_and_grad(const Vec& x, int label, Grad& g, Rng* rng) const {
  if (x.size() != in_dim()) throw Error("fnn: input dimension mismatch");
  const Vec pre = w1 * x + b1.col(0);
  const Vec mask = dropout_mask(pre.size(), dropout_rate, rng);
  const Vec relu = pre.cwiseMax(0.0);
  const Vec h = relu.cwiseProduct(mask);
  const Vec p = softmax(w2 * h + b2.col(0));
  const double loss = -std::log(std::max(p(label), 1e-300));
  Vec dlogits = p;
  dlogits(label) -= 1.0;
  g.w2 += dlogits * h.transpose();
  g.b2.col(0) += dlogits;
  Vec dh = w2.transpose() * dlogits;
  dh = dh.cwiseProduct(mask);
  for (long i = 0; i < pre.size(); ++i) {
    if (pre(i) <= 0) dh(i) = 0;
  }
  g.w1 += dh * x.transpose();
  g.b1.col(0) += dh;
  return loss;
}

}  // namespace flakyfix

#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "flakyfix/nn.hpp"

using namespace flakyfix;

namespace {

Vec random_vec(long n, Rng& rng) {
  Vec v(n);
  for (long i = 0; i < n; ++i) v(i) = standard_normal(rng);
  return v;
}

// Central differences over every entry of `param`, compared with `analytic`.
double max_relative_error(Mat& param, const Mat& analytic, const std::function<double()>& loss) {
  const double h = 1e-6;
  double worst = 0;
  for (long i = 0; i < param.rows(); ++i) {
    for (long j = 0; j < param.cols(); ++j) {
      const double saved = param(i, j);
      param(i, j) = saved + h;
      const double up = loss();
      param(i, j) = saved - h;
      const double down = loss();
      param(i, j) = saved;
      const double numeric = (up - down) / (2 * h);
      const double denom = std::max({std::abs(numeric), std::abs(analytic(i, j)), 1e-6});
      worst = std::max(worst, std::abs(numeric - analytic(i, j)) / denom);
    }
  }
  return worst;
}

}  // namespace

TEST(AdamW, HandComputedStep) {
  // m = 0.02, v = 4e-5; bias-corrected m_hat = 0.2, v_hat = 0.04, so the
  // step is 0.1 * (0.2 / (0.2 + 1e-8) + 0.01 * 0.5).
  Mat p(1, 1), g(1, 1);
  p(0, 0) = 0.5;
  g(0, 0) = 0.2;
  AdamW opt({0.1, 0.9, 0.999, 0.01, 1e-8});
  opt.add(&p);
  opt.step({&g});
  const double expected = 0.5 - 0.1 * (0.2 / (std::sqrt(0.04) + 1e-8) + 0.01 * 0.5);
  EXPECT_NEAR(p(0, 0), expected, 1e-12);
  EXPECT_NEAR(p(0, 0), 0.39950000499999975, 1e-12);
  EXPECT_EQ(opt.steps(), 1);
}

TEST(AdamW, ZeroGradientStillDecays) {
  Mat p = Mat::Constant(2, 2, 1.0), g = Mat::Zero(2, 2);
  AdamW opt({0.1, 0.9, 0.999, 0.5, 1e-8});
  opt.add(&p);
  opt.step({&g});
  EXPECT_NEAR(p(1, 1), 1.0 - 0.1 * 0.5, 1e-12);
}

TEST(Losses, TripletAndSoftmax) {
  Vec a(2), p(2), n(2);
  a << 0, 0;
  p << 1, 0;
  n << 0, 2;
  EXPECT_DOUBLE_EQ(squared_distance(a, n), 4.0);
  EXPECT_DOUBLE_EQ(triplet_loss(a, p, n, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(triplet_loss(a, n, p, 1.0), 4.0);
  Vec logits(2);
  logits << 1000, 1000;
  const Vec s = softmax(logits);
  EXPECT_DOUBLE_EQ(s(0), 0.5);
  EXPECT_DOUBLE_EQ(s.sum(), 1.0);
}

TEST(ProjectionHead, OutputIsUnitLength) {
  Rng rng(1);
  const auto head = ProjectionHead::init(6, 4, 0.1, rng);
  EXPECT_NEAR(head.forward(random_vec(6, rng)).norm(), 1.0, 1e-12);
}

TEST(ProjectionHead, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  int checked = 0;
  for (int point = 0; point < 20; ++point) {
    auto head = ProjectionHead::init(5, 3, 0.1, rng);
    const Vec a = random_vec(5, rng), p = random_vec(5, rng), n = random_vec(5, rng);
    // Distances between unit vectors are at most 4, so margin 5 keeps the
    // hinge active and the loss differentiable.
    const double margin = 5.0;
    auto g = head.zero_grad();
    const double loss = head.triplet_loss_and_grad(a, p, n, margin, g);
    ASSERT_GT(loss, 0.0);
    const auto f = [&] {
      return triplet_loss(head.forward(a), head.forward(p), head.forward(n), margin);
    };
    EXPECT_NEAR(loss, f(), 1e-12);
    EXPECT_LT(max_relative_error(head.weight, g.weight, f), 1e-4) << "point " << point;
    EXPECT_LT(max_relative_error(head.bias, g.bias, f), 1e-4) << "point " << point;
    ++checked;
  }
  EXPECT_EQ(checked, 20);
}

TEST(FnnHead, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  for (int point = 0; point < 20; ++point) {
    auto head = FnnHead::init(4, 6, 0.1, rng);
    const Vec x = random_vec(4, rng);
    const int label = point % 2;
    auto g = head.zero_grad();
    const double loss = head.loss_and_grad(x, label, g);
    const auto f = [&] { return -std::log(head.probabilities(x)(label)); };
    EXPECT_NEAR(loss, f(), 1e-12);
    // ReLU kinks are measure-zero; a point landing within h of one would
    // show up as a large error here.
    EXPECT_LT(max_relative_error(head.w1, g.w1, f), 1e-4) << "point " << point;
    EXPECT_LT(max_relative_error(head.b1, g.b1, f), 1e-4) << "point " << point;
    EXPECT_LT(max_relative_error(head.w2, g.w2, f), 1e-4) << "point " << point;
    EXPECT_LT(max_relative_error(head.b2, g.b2, f), 1e-4) << "point " << point;
  }
}

TEST(FnnHead, DropoutOnlyInTraining) {
  Rng rng(9);
  auto head = FnnHead::init(8, 16, 0.5, rng);
  const Vec x = random_vec(8, rng);
  auto g1 = head.zero_grad(), g2 = head.zero_grad();
  EXPECT_DOUBLE_EQ(head.loss_and_grad(x, 1, g1), head.loss_and_grad(x, 1, g2));
  Rng r1(1), r2(2);
  auto g3 = head.zero_grad(), g4 = head.zero_grad();
  EXPECT_NE(head.loss_and_grad(x, 1, g3, &r1), head.loss_and_grad(x, 1, g4, &r2));
  EXPECT_NEAR(head.probabilities(x).sum(), 1.0, 1e-12);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "flakyfix/error.hpp"
#include "flakyfix/random.hpp"
#include "flakyfix/stats.hpp"
#include "oracles.hpp"

using namespace flakyfix;

namespace {

struct Synthetic {
  std::vector<double> x, y;
};

Synthetic synthetic_logistic(std::size_t n, double b0, double b1, std::uint64_t seed) {
  Rng rng(seed);
  Synthetic s;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = uniform_real(rng, 0.0, 100.0);
    s.x.push_back(x);
    s.y.push_back(uniform_real(rng) < logistic(b0 + b1 * x) ? 1.0 : 0.0);
  }
  return s;
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST(Fisher, MatchesEnumerationForAllSmallTables) {
  std::size_t tables = 0;
  for (std::size_t a = 0; a <= 40; ++a) {
    for (std::size_t b = 0; a + b <= 40; ++b) {
      for (std::size_t c = 0; a + b + c <= 40; ++c) {
        for (std::size_t d = 0; a + b + c + d <= 40; ++d) {
          if (a + b + c + d == 0) continue;
          const Table2x2 t = {{{a, b}, {c, d}}};
          ASSERT_NEAR(fisher_exact(t), oracle::fisher(t), 1e-12) << a << " " << b << " " << c << " " << d;
          ++tables;
        }
      }
    }
  }
  EXPECT_EQ(tables, 135750u);
}

TEST(Fisher, KnownValues) {
  // Tea tasting: 3 of 4 cups right, two-sided p = 34/70.
  EXPECT_NEAR(fisher_exact({{{3, 1}, {1, 3}}}), 34.0 / 70.0, 1e-14);
  EXPECT_NEAR(hypergeometric_probability({{{3, 1}, {1, 3}}}), 16.0 / 70.0, 1e-14);
  EXPECT_THROW(fisher_exact({{{0, 0}, {0, 0}}}), Error);
}

TEST(Wilcoxon, MatchesEnumerationUpToTwelve) {
  Rng rng(17);
  for (std::size_t n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 15; ++rep) {
      std::vector<double> d(n);
      // Small integers force ties and zeros.
      for (auto& v : d) v = static_cast<double>(static_cast<int>(uniform_index(rng, 11)) - 5);
      if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0; })) d[0] = 1;
      const auto r = wilcoxon_signed_rank(d);
      EXPECT_TRUE(r.exact);
      EXPECT_NEAR(r.p_value, oracle::wilcoxon_exact(d), 1e-12);
    }
  }
}

TEST(Wilcoxon, KnownSmallCase) {
  // All five differences positive: only one of 32 sign patterns is as
  // extreme on each side, so p = 2/32.
  const auto r = wilcoxon_signed_rank({1, 2, 3, 4, 5}, {0, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(r.p_value, 2.0 / 32.0);
  EXPECT_DOUBLE_EQ(r.w_plus, 15.0);
  EXPECT_DOUBLE_EQ(r.w_minus, 0.0);
}

TEST(Wilcoxon, NormalApproximationForLargeSamples) {
  std::vector<double> d;
  for (int i = 1; i <= 30; ++i) d.push_back(i % 4 == 0 ? -i : i);
  const auto r = wilcoxon_signed_rank(d);
  EXPECT_FALSE(r.exact);
  const double mu = 30.0 * 31 / 4, sigma = std::sqrt(30.0 * 31 * 61 / 24);
  EXPECT_NEAR(r.z, (r.w_plus - mu) / sigma, 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(std::abs(r.z) / std::sqrt(2.0)), 1e-12);
}

TEST(Wilcoxon, DegenerateSample) {
  EXPECT_THROW(wilcoxon_signed_rank({0, 0, 0}), Error);
  EXPECT_THROW(wilcoxon_signed_rank({1, 2}, {1}), Error);
}

TEST(Kappa, IdenticalAndHandComputed) {
  EXPECT_DOUBLE_EQ(cohens_kappa({"a", "b", "a", "c"}, {"a", "b", "a", "c"}).kappa, 1.0);
  // p_o = 3/4, p_e = 1/2 * 1/4 + 1/2 * 3/4 = 1/2.
  const auto k = cohens_kappa({"y", "y", "n", "n"}, {"y", "n", "n", "n"});
  EXPECT_DOUBLE_EQ(k.observed, 0.75);
  EXPECT_DOUBLE_EQ(k.expected, 0.5);
  EXPECT_DOUBLE_EQ(k.kappa, 0.5);
  EXPECT_TRUE(cohens_kappa({"a", "a"}, {"a", "a"}).undefined);
  EXPECT_THROW(cohens_kappa({"a"}, {}), Error);
}

TEST(Metrics, PrecisionRecall) {
  const auto m = precision_recall_f1({6, 2, 10, 4});
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_NEAR(m.f1, 2 * 0.75 * 0.6 / 1.35, 1e-15);
  const auto none = precision_recall_f1({0, 0, 5, 0});
  EXPECT_TRUE(none.precision_undefined);
  EXPECT_TRUE(none.recall_undefined);
}

TEST(Bootstrap, TwentyFourOfThirtyFive) {
  std::vector<bool> outcomes(35, false);
  std::fill(outcomes.begin(), outcomes.begin() + 24, true);
  const auto r = bootstrap_pass_rate(outcomes);
  EXPECT_DOUBLE_EQ(r.point_estimate, 24.0 / 35.0);
  EXPECT_NEAR(r.lower, 0.51, 0.02);
  EXPECT_NEAR(r.upper, 0.83, 0.02);
  const auto again = bootstrap_pass_rate(outcomes);
  EXPECT_EQ(r.lower, again.lower);
  EXPECT_EQ(r.upper, again.upper);
  // Bounds are resampled proportions, i.e. multiples of 1/35.
  EXPECT_NEAR(r.lower * 35, std::round(r.lower * 35), 1e-9);
}

TEST(Bootstrap, Errors) {
  EXPECT_THROW(bootstrap_pass_rate({}), Error);
  EXPECT_THROW(bootstrap_pass_rate({true}, 1.0), Error);
  EXPECT_THROW(bootstrap_pass_rate({true}, 0.95, 0), Error);
}

TEST(Logistic, RecoversKnownCoefficients) {
  const double b0 = -4.0, b1 = 0.06;
  const auto s = synthetic_logistic(500, b0, b1, 21);
  const auto m = fit_logistic(s.x, s.y);
  ASSERT_TRUE(m.converged);
  EXPECT_LT(std::abs(m.intercept - b0), 3 * std::sqrt(m.covariance[0][0]));
  EXPECT_LT(std::abs(m.slope - b1), 3 * std::sqrt(m.covariance[1][1]));
  EXPECT_GT(m.lr_chi_square, 0);
  EXPECT_NEAR(m.lr_chi_square, 2 * (m.log_likelihood - m.null_log_likelihood), 1e-9);
  EXPECT_NEAR(m.lr_p_value, chi_square_sf(m.lr_chi_square, 1), 1e-15);
}

TEST(Logistic, LogLikelihoodNeverDecreases) {
  const auto s = synthetic_logistic(200, 1.0, -0.03, 5);
  const auto m = fit_logistic(s.x, s.y);
  ASSERT_GE(m.log_likelihood_trace.size(), 2u);
  for (std::size_t i = 1; i < m.log_likelihood_trace.size(); ++i) {
    EXPECT_GE(m.log_likelihood_trace[i], m.log_likelihood_trace[i - 1] - 1e-12);
  }
  EXPECT_NEAR(m.log_likelihood_trace.back(), m.log_likelihood, 1e-9);
}

TEST(Logistic, DeltaMethodAgreesWithParametricBootstrap) {
  const auto s = synthetic_logistic(500, -4.0, 0.06, 33);
  const auto m = fit_logistic(s.x, s.y);
  const std::vector<double> grid = {20, 40, 60, 80, 95};
  std::vector<std::vector<double>> draws(grid.size());
  Rng rng(99);
  for (int b = 0; b < 400; ++b) {
    std::vector<double> yb;
    for (double x : s.x) yb.push_back(uniform_real(rng) < logistic(m.intercept + m.slope * x) ? 1.0 : 0.0);
    const auto mb = fit_logistic(s.x, yb);
    for (std::size_t g = 0; g < grid.size(); ++g) draws[g].push_back(logistic(mb.intercept + mb.slope * grid[g]));
  }
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto pred = predict_pass_probability(m, grid[g]);
    EXPECT_NEAR(pred.lower, quantile(draws[g], 0.025), 0.03) << grid[g];
    EXPECT_NEAR(pred.upper, quantile(draws[g], 0.975), 0.03) << grid[g];
    EXPECT_LE(pred.lower, pred.p);
    EXPECT_GE(pred.upper, pred.p);
  }
}

TEST(Logistic, SeparationIsAnError) {
  const std::vector<double> x = {10, 20, 30, 40, 60, 70, 80, 90};
  const std::vector<double> y = {0, 0, 0, 0, 1, 1, 1, 1};
  try {
    fit_logistic(x, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("separation"), std::string::npos) << e.what();
  }
  EXPECT_THROW(fit_logistic({1, 2}, {1, 1}), Error);
  EXPECT_THROW(fit_logistic({1, 2}, {1, 2}), Error);
}

TEST(Projection, SumsBoundsAndRoundsHalfUp) {
  const auto s = synthetic_logistic(300, -3.0, 0.05, 8);
  const auto m = fit_logistic(s.x, s.y);
  const std::vector<double> scores = {55, 70, 85, 90};
  const auto p = project_pass_bounds(m, scores);
  double lo = 0, hi = 0;
  for (double x : scores) {
    const auto pred = predict_pass_probability(m, x);
    lo += pred.lower;
    hi += pred.upper;
  }
  EXPECT_NEAR(p.low_sum, lo, 1e-12);
  EXPECT_NEAR(p.high_sum, hi, 1e-12);
  EXPECT_EQ(p.low_count, static_cast<std::size_t>(std::floor(lo + 0.5)));
  EXPECT_DOUBLE_EQ(p.high_pct, static_cast<double>(p.high_count) / 4.0);
  EXPECT_THROW(project_pass_bounds(m, {}), Error);
}

TEST(Helpers, QuantilesAndSummaries) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1), 0.05, 1e-12);
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_DOUBLE_EQ(median({5, 1, 3}), 3.0);
}

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace flakyfix {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// A zero denominator yields 0 with the matching flag set.
struct ClassifierMetrics {
  double precision = 0, recall = 0, f1 = 0;
  bool precision_undefined = false, recall_undefined = false, f1_undefined = false;
};

ClassifierMetrics precision_recall_f1(const ConfusionCounts& c);

using Table2x2 = std::array<std::array<std::size_t, 2>, 2>;

/// Point probability of a 2x2 table under fixed margins.
double hypergeometric_probability(const Table2x2& t);

/// Two-sided Fisher exact test: total probability of all tables with the
/// observed margins that are no more likely than the observed one.
/// Throws flakyfix::Error on an all-zero table.
double fisher_exact(const Table2x2& t);

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0, w_minus = 0;
  std::size_t n = 0;  // nonzero differences
  bool exact = false;
  double z = 0;  // normal approximation only
};

/// Two-sided signed-rank test on x - y. Zero differences are dropped, ties
/// get average ranks; exact by enumeration for n <= 12, otherwise a
/// tie-corrected normal approximation. Throws "degenerate sample" when every
/// difference is zero.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y);
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences);

struct KappaResult {
  double kappa = 0;
  double observed = 0;  // p_o
  double expected = 0;  // p_e
  bool undefined = false;  // p_e == 1
};

KappaResult cohens_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b);

struct BootstrapResult {
  double point_estimate = 0, lower = 0, upper = 0;
  double level = 0.95;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultBootstrapSeed = 42;

/// Percentile bootstrap of the pass proportion. The bounds are the order
/// statistics at ceil(B*(1-level)/2) and ceil(B*(1+level)/2) (1-based).
BootstrapResult bootstrap_pass_rate(const std::vector<bool>& outcomes, double level = 0.95,
                                    std::size_t iterations = 10000,
                                    std::uint64_t seed = kDefaultBootstrapSeed);

struct LogisticModel {
  double intercept = 0;
  double slope = 0;
  std::array<std::array<double, 2>, 2> covariance{};
  bool converged = false;
  std::size_t iterations = 0;
  double log_likelihood = 0;
  double null_log_likelihood = 0;
  double lr_chi_square = 0;
  double lr_p_value = 1;
  double accuracy = 0;  // fraction classified correctly at p >= 0.5
  std::vector<double> log_likelihood_trace;  // start value, then one per iteration
};

double logistic(double eta);

/// Maximum likelihood by IRLS with step halving; stops when no coefficient
/// moves by 1e-8 or after 100 iterations. Throws flakyfix::Error when y has a
/// single class or when a coefficient leaves [-30, 30] (separation).
LogisticModel fit_logistic(const std::vector<double>& x, const std::vector<double>& y);

struct PassPrediction {
  double p = 0, lower = 0, upper = 0;
};

/// Delta-method interval: eta +- z * se(eta), mapped through the logistic
/// function. Throws when the model did not converge.
PassPrediction predict_pass_probability(const LogisticModel& m, double x, double level = 0.95);

struct PassProjection {
  std::size_t low_count = 0, high_count = 0;
  double low_pct = 0, high_pct = 0;
  double low_sum = 0, high_sum = 0;
};

/// Sums per-test interval bounds and rounds half up. Throws on empty input.
PassProjection project_pass_bounds(const LogisticModel& m, const std::vector<double>& scores,
                                   double level = 0.95);

double normal_quantile(double p);
double chi_square_sf(double x, double df);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);

}  // namespace flakyfix

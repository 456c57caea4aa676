#include "flakyfix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "flakyfix/error.hpp"
#include "flakyfix/random.hpp"

namespace flakyfix {
namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

// Index of the 1-based order statistic ceil(B * q), guarding against
// representation error in B * q.
std::size_t order_index(std::size_t b, double q) {
  const double k = static_cast<double>(b) * q;
  const double r = std::round(k);
  const double rank = std::abs(k - r) < 1e-9 ? r : std::ceil(k);
  return static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(b))) - 1;
}

}  // namespace

ClassifierMetrics precision_recall_f1(const ConfusionCounts& c) {
  ClassifierMetrics m;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp == 0) m.precision_undefined = true;
  else m.precision = tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn == 0) m.recall_undefined = true;
  else m.recall = tp / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall == 0.0) m.f1_undefined = true;
  else m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

double hypergeometric_probability(const Table2x2& t) {
  const double r1 = static_cast<double>(t[0][0] + t[0][1]);
  const double r2 = static_cast<double>(t[1][0] + t[1][1]);
  const double c1 = static_cast<double>(t[0][0] + t[1][0]);
  const double n = r1 + r2;
  const double a = static_cast<double>(t[0][0]);
  return std::exp(log_choose(r1, a) + log_choose(r2, c1 - a) - log_choose(n, c1));
}

double fisher_exact(const Table2x2& t) {
  const std::size_t r1 = t[0][0] + t[0][1], r2 = t[1][0] + t[1][1];
  const std::size_t c1 = t[0][0] + t[1][0];
  if (r1 + r2 == 0) throw Error("fisher_exact: all-zero table");
  const double observed = hypergeometric_probability(t);
  const std::size_t lo = c1 > r2 ? c1 - r2 : 0;
  const std::size_t hi = std::min(r1, c1);
  double p = 0.0;
  for (std::size_t a = lo; a <= hi; ++a) {
    const Table2x2 x = {{{a, r1 - a}, {c1 - a, r2 - (c1 - a)}}};
    const double px = hypergeometric_probability(x);
    if (px <= observed * (1.0 + 1e-7)) p += px;
  }
  return std::min(1.0, p);
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("wilcoxon: samples differ in length");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return wilcoxon_signed_rank(d);
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& differences) {
  std::vector<double> d;
  for (double v : differences) {
    if (v != 0.0) d.push_back(v);
  }
  if (d.empty()) throw Error("wilcoxon: degenerate sample (all differences are zero)");
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  std::vector<double> rank(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  WilcoxonResult r;
  r.n = n;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? r.w_plus : r.w_minus) += rank[i];

  if (n <= 12) {
    r.exact = true;
    const std::size_t total = std::size_t{1} << n;
    std::size_t ge = 0, le = 0;
    for (std::size_t mask = 0; mask < total; ++mask) {
      double w = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask >> i & 1U) w += rank[i];
      }
      if (w >= r.w_plus - 1e-9) ++ge;
      if (w <= r.w_plus + 1e-9) ++le;
    }
    const double tail = static_cast<double>(std::min(ge, le)) / static_cast<double>(total);
    r.p_value = std::min(1.0, 2.0 * tail);
    return r;
  }
  const double nn = static_cast<double>(n);
  const double mean_w = nn * (nn + 1) / 4.0;
  const double var_w = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
  if (var_w <= 0) {
    r.p_value = 1.0;
    return r;
  }
  r.z = (r.w_plus - mean_w) / std::sqrt(var_w);
  r.p_value = std::min(1.0, std::erfc(std::abs(r.z) / std::sqrt(2.0)));
  return r;
}

KappaResult cohens_kappa(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size() || a.empty()) throw Error("cohens_kappa: need equal-length nonempty ratings");
  const double n = static_cast<double>(a.size());
  std::map<std::string, double> ca, cb;
  double agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    if (a[i] == b[i]) agree += 1;
  }
  KappaResult k;
  k.observed = agree / n;
  for (const auto& [label, count] : ca) {
    auto it = cb.find(label);
    if (it != cb.end()) k.expected += (count / n) * (it->second / n);
  }
  if (std::abs(1.0 - k.expected) < 1e-15) {
    k.undefined = true;
    k.kappa = std::nan("");
    return k;
  }
  k.kappa = (k.observed - k.expected) / (1.0 - k.expected);
  return k;
}

BootstrapResult bootstrap_pass_rate(const std::vector<bool>& outcomes, double level,
                                    std::size_t iterations, std::uint64_t seed) {
  if (outcomes.empty()) throw Error("bootstrap: empty sample");
  if (!(level > 0.0 && level < 1.0)) throw Error("bootstrap: level must lie in (0, 1)");
  if (iterations == 0) throw Error("bootstrap: need at least one iteration");
  const std::size_t n = outcomes.size();
  BootstrapResult r;
  r.level = level;
  r.iterations = iterations;
  r.seed = seed;
  r.point_estimate =
      static_cast<double>(std::count(outcomes.begin(), outcomes.end(), true)) / static_cast<double>(n);
  Rng rng(seed);
  std::vector<double> means(iterations);
  for (auto& m : means) {
    std::size_t passes = 0;
    for (std::size_t i = 0; i < n; ++i) passes += outcomes[uniform_index(rng, n)] ? 1 : 0;
    m = static_cast<double>(passes) / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = 1.0 - level;
  r.lower = std::min(means[order_index(iterations, alpha / 2.0)], r.point_estimate);
  r.upper = std::max(means[order_index(iterations, 1.0 - alpha / 2.0)], r.point_estimate);
  return r;
}

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

namespace {

double log_likelihood(const std::vector<double>& x, const std::vector<double>& y, double b0,
                      double b1) {
  double ll = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double eta = b0 + b1 * x[i];
    // log(1 + e^eta) computed stably
    const double softplus = eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
    ll += y[i] * eta - softplus;
  }
  return ll;
}

}  // namespace

LogisticModel fit_logistic(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw Error("fit_logistic: need paired nonempty samples");
  double ones = 0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw Error("fit_logistic: outcomes must be 0 or 1");
    ones += v;
  }
  const double n = static_cast<double>(y.size());
  if (ones == 0 || ones == n) throw Error("fit_logistic: both outcome classes must be present");

  LogisticModel m;
  const double ybar = ones / n;
  m.null_log_likelihood = ones * std::log(ybar) + (n - ones) * std::log(1 - ybar);
  double b0 = std::log(ybar / (1 - ybar)), b1 = 0.0;
  double ll = log_likelihood(x, y, b0, b1);
  m.log_likelihood_trace.push_back(ll);

  auto information = [&](double c0, double c1, double& i00, double& i01, double& i11) {
    i00 = i01 = i11 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double mu = logistic(c0 + c1 * x[i]);
      const double w = mu * (1 - mu);
      i00 += w;
      i01 += w * x[i];
      i11 += w * x[i] * x[i];
    }
  };

  for (std::size_t iter = 0; iter < 100; ++iter) {
    double g0 = 0, g1 = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double r = y[i] - logistic(b0 + b1 * x[i]);
      g0 += r;
      g1 += r * x[i];
    }
    double i00, i01, i11;
    information(b0, b1, i00, i01, i11);
    const double det = i00 * i11 - i01 * i01;
    if (!(det > 0) || !std::isfinite(det)) {
      throw Error("fit_logistic: singular information matrix (complete separation or constant x)");
    }
    double d0 = (i11 * g0 - i01 * g1) / det;
    double d1 = (-i01 * g0 + i00 * g1) / det;
    double next = log_likelihood(x, y, b0 + d0, b1 + d1);
    for (int halve = 0; halve < 50 && next < ll; ++halve) {
      d0 /= 2;
      d1 /= 2;
      next = log_likelihood(x, y, b0 + d0, b1 + d1);
    }
    if (next < ll) {
      d0 = d1 = 0;
      next = ll;
    }
    b0 += d0;
    b1 += d1;
    ll = next;
    m.iterations = iter + 1;
    m.log_likelihood_trace.push_back(ll);
    if (std::abs(b0) > 30 || std::abs(b1) > 30) {
      throw Error("fit_logistic: complete separation detected (coefficients diverge: intercept " +
                  std::to_string(b0) + ", slope " + std::to_string(b1) + ")");
    }
    if (std::max(std::abs(d0), std::abs(d1)) < 1e-8) {
      m.converged = true;
      break;
    }
  }
  m.intercept = b0;
  m.slope = b1;
  m.log_likelihood = ll;
  double i00, i01, i11;
  information(b0, b1, i00, i01, i11);
  const double det = i00 * i11 - i01 * i01;
  m.covariance = {{{i11 / det, -i01 / det}, {-i01 / det, i00 / det}}};
  m.lr_chi_square = std::max(0.0, 2.0 * (m.log_likelihood - m.null_log_likelihood));
  m.lr_p_value = chi_square_sf(m.lr_chi_square, 1.0);
  double correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool pass = logistic(b0 + b1 * x[i]) >= 0.5;
    if (pass == (y[i] == 1.0)) correct += 1;
  }
  m.accuracy = correct / n;
  return m;
}

PassPrediction predict_pass_probability(const LogisticModel& m, double x, double level) {
  if (!m.converged) throw Error("predict_pass_probability: model did not converge");
  const double eta = m.intercept + m.slope * x;
  const auto& c = m.covariance;
  const double var = c[0][0] + 2 * x * c[0][1] + x * x * c[1][1];
  const double se = std::sqrt(std::max(0.0, var));
  const double z = normal_quantile(0.5 + level / 2.0);
  return {logistic(eta), logistic(eta - z * se), logistic(eta + z * se)};
}

PassProjection project_pass_bounds(const LogisticModel& m, const std::vector<double>& scores,
                                   double level) {
  if (scores.empty()) throw Error("project_pass_bounds: no scores");
  PassProjection p;
  for (double s : scores) {
    const auto pred = predict_pass_probability(m, s, level);
    p.low_sum += pred.lower;
    p.high_sum += pred.upper;
  }
  p.low_count = static_cast<std::size_t>(std::floor(p.low_sum + 0.5));
  p.high_count = static_cast<std::size_t>(std::floor(p.high_sum + 0.5));
  const double n = static_cast<double>(scores.size());
  p.low_pct = static_cast<double>(p.low_count) / n;
  p.high_pct = static_cast<double>(p.high_count) / n;
  return p;
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

double chi_square_sf(double x, double df) {
  if (x <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace flakyfix

#include "bmd/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bmd/rng.hpp"
#include "bmd/special.hpp"

namespace bmd {

namespace {

constexpr int kMaxDim = 3;

double log_sum_exp(const std::vector<double>& v) {
  double mx = kLogZero;
  for (double x : v) mx = std::max(mx, x);
  if (mx <= kLogZero) return kLogZero;
  double s = 0.0;
  for (double x : v)
    if (x > kLogZero) s += std::exp(x - mx);
  return mx + std::log(s);
}

bool cholesky3(const double* m, int dim, double* lower) {
  std::fill(lower, lower + dim * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m[i * dim + j];
      for (int k = 0; k < j; ++k) s -= lower[i * dim + k] * lower[j * dim + k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        lower[i * dim + i] = std::sqrt(s);
      } else {
        lower[i * dim + j] = s / lower[j * dim + j];
      }
    }
  }
  return true;
}

}  // namespace

double bridge_log_marginal(const LogDensity& target, const std::vector<double>& draws, int dim,
                           std::uint64_t seed) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("bridge: dimension must be 1..3");
  const size_t n = draws.size() / dim;
  if (n < 2) throw std::invalid_argument("bridge: need at least 2 posterior draws");

  // empirical mean and covariance of the posterior sample
  double mu[kMaxDim] = {0.0};
  for (size_t k = 0; k < n; ++k)
    for (int u = 0; u < dim; ++u) mu[u] += draws[k * dim + u];
  for (int u = 0; u < dim; ++u) mu[u] /= n;

  double cov[kMaxDim * kMaxDim] = {0.0};
  for (size_t k = 0; k < n; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        cov[i * dim + j] += (draws[k * dim + i] - mu[i]) * (draws[k * dim + j] - mu[j]);
  for (int i = 0; i < dim * dim; ++i) cov[i] /= n;

  double lower[kMaxDim * kMaxDim];
  if (!cholesky3(cov, dim, lower)) {
    for (int i = 0; i < dim; ++i) cov[i * dim + i] += 1e-10;
    if (!cholesky3(cov, dim, lower))
      throw std::runtime_error("bridge: covariance not factorizable after regularization");
  }
  double log_det_half = 0.0;
  for (int i = 0; i < dim; ++i) log_det_half += std::log(lower[i * dim + i]);

  auto log_g = [&](const double* x) {
    // solve L y = x - mu by forward substitution
    double y[kMaxDim];
    for (int i = 0; i < dim; ++i) {
      double s = x[i] - mu[i];
      for (int j = 0; j < i; ++j) s -= lower[i * dim + j] * y[j];
      y[i] = s / lower[i * dim + i];
    }
    double q = 0.0;
    for (int i = 0; i < dim; ++i) q += y[i] * y[i];
    return -0.5 * dim * std::log(2.0 * M_PI) - log_det_half - 0.5 * q;
  };

  Rng rng(seed);
  std::vector<double> num_terms;
  num_terms.reserve(n);
  size_t valid = 0;
  for (size_t j = 0; j < n; ++j) {
    double eta[kMaxDim], x[kMaxDim];
    for (int u = 0; u < dim; ++u) eta[u] = rng.normal();
    for (int i = 0; i < dim; ++i) {
      double s = mu[i];
      for (int jj = 0; jj <= i; ++jj) s += lower[i * dim + jj] * eta[jj];
      x[i] = s;
    }
    const double lt = target(x);
    if (lt > kLogZero) {
      num_terms.push_back(0.5 * (lt - log_g(x)));
      ++valid;
    } else {
      num_terms.push_back(kLogZero);
    }
  }
  if (valid == 0)
    throw std::runtime_error("bridge: all draws from g landed at zero posterior density");

  std::vector<double> den_terms;
  den_terms.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    const double* x = draws.data() + k * dim;
    const double lt = target(x);
    if (lt <= kLogZero)
      throw std::runtime_error("bridge: posterior draw with zero target density");
    den_terms.push_back(0.5 * (log_g(x) - lt));
  }

  const double log_num = log_sum_exp(num_terms) - std::log(static_cast<double>(n));
  const double log_den = log_sum_exp(den_terms) - std::log(static_cast<double>(n));
  return log_num - log_den;
}

std::vector<double> posterior_model_probs(const std::vector<double>& log_marginals,
                                          const std::vector<double>& prior_probs) {
  const size_t q = log_marginals.size();
  if (q == 0) throw std::invalid_argument("posterior_model_probs: no models");
  std::vector<double> lw(q);
  for (size_t i = 0; i < q; ++i) {
    const double lp = prior_probs.empty()
                          ? -std::log(static_cast<double>(q))
                          : (prior_probs[i] > 0.0 ? std::log(prior_probs[i]) : kLogZero);
    lw[i] = log_marginals[i] + lp;
  }
  const double lse = log_sum_exp(lw);
  if (lse <= kLogZero)
    throw std::runtime_error("posterior_model_probs: every marginal is zero");
  std::vector<double> w(q);
  for (size_t i = 0; i < q; ++i) w[i] = lw[i] > kLogZero ? std::exp(lw[i] - lse) : 0.0;
  return w;
}

double lower_percentile_order_stat(std::vector<double> draws, double level) {
  if (draws.empty()) throw std::invalid_argument("order statistic of empty sample");
  std::sort(draws.begin(), draws.end());
  size_t idx = static_cast<size_t>(std::floor(level * draws.size()));
  if (idx < 1) idx = 1;
  if (idx > draws.size()) idx = draws.size();
  return draws[idx - 1];
}

ModelPosterior model_posterior_summary(const Chain& chain, const DiagnosticReport& report,
                                       const LogDensity& target, std::uint64_t bridge_seed) {
  if (!report.passed())
    throw std::invalid_argument("model_posterior_summary: diagnostics did not pass");
  const int K = chain.raw.iterations;
  const int dim = chain.raw.dim;
  const int k0 = report.burn_in_index;  // 1-based
  const int kept = K - k0 + 1;

  ModelPosterior mp;
  mp.model = chain.model;
  mp.diagnostic = report;
  mp.acceptance_rate = static_cast<double>(chain.raw.acceptance_count) / (K - 1);

  std::vector<double> retained(static_cast<size_t>(kept) * dim);
  mp.xi_draws.resize(kept);
  for (int k = 0; k < kept; ++k) {
    const double* d = chain.raw.draw(k0 - 1 + k);
    std::copy(d, d + dim, retained.begin() + static_cast<size_t>(k) * dim);
    mp.xi_draws[k] = d[0];
  }

  double s = 0.0;
  for (double x : mp.xi_draws) s += x;
  mp.bmd_mean = s / kept;
  mp.bmdl = lower_percentile_order_stat(mp.xi_draws);
  mp.log_marginal = bridge_log_marginal(target, retained, dim, bridge_seed);
  return mp;
}

double bma_point_estimate(const std::vector<ModelPosterior>& models,
                          const std::vector<double>& weights) {
  if (models.size() != weights.size())
    throw std::invalid_argument("bma_point_estimate: weight count mismatch");
  double s = 0.0;
  for (size_t i = 0; i < models.size(); ++i) s += weights[i] * models[i].bmd_mean;
  return s;
}

double bma_bmdl(const std::vector<ModelPosterior>& models, const std::vector<double>& weights,
                double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::domain_error("bma_bmdl: level outside (0,1)");
  if (models.size() != weights.size())
    throw std::invalid_argument("bma_bmdl: weight count mismatch");

  struct P {
    double value;
    double weight;
  };
  std::vector<P> pooled;
  for (size_t q = 0; q < models.size(); ++q) {
    const auto& d = models[q].xi_draws;
    const double w = weights[q] / d.size();
    for (double v : d) pooled.push_back({v, w});
  }
  if (pooled.empty()) throw std::invalid_argument("bma_bmdl: no draws");
  std::sort(pooled.begin(), pooled.end(),
            [](const P& a, const P& b) { return a.value < b.value; });

  std::vector<double> values(pooled.size()), prefix(pooled.size());
  double acc = 0.0;
  for (size_t i = 0; i < pooled.size(); ++i) {
    values[i] = pooled[i].value;
    acc += pooled[i].weight;
    prefix[i] = acc;
  }

  auto cdf = [&](double x) {
    const auto it = std::upper_bound(values.begin(), values.end(), x);
    if (it == values.begin()) return 0.0;
    return prefix[static_cast<size_t>(it - values.begin()) - 1];
  };
  // absorb accumulation error in the prefix sums (e.g. 10 x 0.005)
  const double lv = level - 1e-12;

  if (cdf(values.front()) >= lv) return values.front();

  // Bisect the right-continuous step cdf, then snap to the pooled draw
  // carrying the crossing.
  double lo = values.front(), hi = values.back();
  const double tol = std::ldexp(1.0, -13);
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= lv)
      hi = mid;
    else
      lo = mid;
  }
  auto it = std::upper_bound(values.begin(), values.end(), lo);
  while (it != values.end() && prefix[static_cast<size_t>(it - values.begin())] < lv) ++it;
  if (it == values.end()) return values.back();
  return *it;
}

}  // namespace bmd

#include "bmd/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bmd/rng.hpp"
#include "bmd/special.hpp"

namespace bmd {

namespace {

constexpr int kMaxDim = 3;

// Cholesky factor of a symmetric dim x dim matrix (row-major). Returns
// false if the matrix is not positive definite.
bool cholesky(const double* m, int dim, double* lower) {
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

std::vector<double> AmChain::component(int u) const {
  std::vector<double> out(iterations);
  for (int k = 0; k < iterations; ++k) out[k] = draws[static_cast<size_t>(k) * dim + u];
  return out;
}

AmChain am_sample(const LogDensity& target, const std::vector<double>& init,
                  const AmConfig& config) {
  const int dim = static_cast<int>(init.size());
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("am_sample: dimension must be 1..3");
  const int K = config.iterations;
  if (K < 2) throw std::invalid_argument("am_sample: iterations must be at least 2");
  if (!(config.target_acceptance > 0.0 && config.target_acceptance < 1.0))
    throw std::invalid_argument("am_sample: target acceptance outside (0,1)");

  Rng rng(config.seed);

  double theta[kMaxDim], mu[kMaxDim], log_v[kMaxDim];
  double sigma[kMaxDim * kMaxDim] = {0.0};
  for (int u = 0; u < dim; ++u) {
    theta[u] = init[u];
    mu[u] = init[u];
    log_v[u] = std::log(2.38 * 2.38 / dim);
    sigma[u * dim + u] = 1.0;
  }
  double lp = target(theta);
  if (!std::isfinite(lp))
    throw std::invalid_argument("am_sample: starting point has zero target density");

  AmChain chain;
  chain.dim = dim;
  chain.iterations = K;
  chain.seed = config.seed;
  chain.draws.resize(static_cast<size_t>(K) * dim);
  chain.log_densities.resize(K);
  std::copy(theta, theta + dim, chain.draws.begin());
  chain.log_densities[0] = lp;

  double prop[kMaxDim], z[kMaxDim], eta[kMaxDim];
  double scaled[kMaxDim * kMaxDim], lower[kMaxDim * kMaxDim];

  for (int k = 2; k <= K; ++k) {
    const double s_k = config.adapt ? std::pow(static_cast<double>(k), -config.step_exponent) : 0.0;

    // proposal covariance V^{1/2} Sigma V^{1/2}, regularized
    for (int i = 0; i < dim; ++i) {
      const double vi = std::exp(0.5 * log_v[i]);
      for (int j = 0; j < dim; ++j) {
        const double vj = std::exp(0.5 * log_v[j]);
        scaled[i * dim + j] = vi * sigma[i * dim + j] * vj;
      }
      scaled[i * dim + i] += 1e-12;
    }
    if (!cholesky(scaled, dim, lower)) {
      std::fill(lower, lower + dim * dim, 0.0);
      for (int i = 0; i < dim; ++i)
        lower[i * dim + i] = std::sqrt(std::max(scaled[i * dim + i], 1e-12));
    }

    for (int u = 0; u < dim; ++u) eta[u] = rng.normal();
    for (int i = 0; i < dim; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += lower[i * dim + j] * eta[j];
      z[i] = s;
    }

    for (int u = 0; u < dim; ++u) prop[u] = theta[u] + z[u];
    const double lp_prop = target(prop);
    const double alpha = lp_prop <= kLogZero ? 0.0 : std::min(1.0, std::exp(lp_prop - lp));

    // componentwise acceptance probabilities at the pre-move state,
    // reusing the u-th component of the joint proposal
    if (config.adapt) {
      for (int u = 0; u < dim; ++u) {
        double tu[kMaxDim];
        std::copy(theta, theta + dim, tu);
        tu[u] += z[u];
        const double lpu = target(tu);
        const double alpha_u = lpu <= kLogZero ? 0.0 : std::min(1.0, std::exp(lpu - lp));
        log_v[u] += s_k * (alpha_u - config.target_acceptance);
      }
    }

    if (alpha > 0.0 && rng.uniform() < alpha) {
      std::copy(prop, prop + dim, theta);
      lp = lp_prop;
      ++chain.acceptance_count;
    }

    if (config.adapt) {
      double delta[kMaxDim];
      for (int u = 0; u < dim; ++u) delta[u] = theta[u] - mu[u];
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          sigma[i * dim + j] += s_k * (delta[i] * delta[j] - sigma[i * dim + j]);
      for (int u = 0; u < dim; ++u) mu[u] += s_k * delta[u];
    }

    std::copy(theta, theta + dim, chain.draws.begin() + static_cast<size_t>(k - 1) * dim);
    chain.log_densities[k - 1] = lp;
  }
  return chain;
}

ThetaVector initial_theta(const QuantalDataset& data, const ScreenResult& scr, ModelId model,
                          double bmr) {
  if (!scr.passed) throw std::invalid_argument("initial_theta: data failed the screen");
  const double d_m = data.doses.back();  // 1 after scaling

  ThetaVector t;
  t.gamma0 = (data.responders[0] + 0.25) / (data.group_sizes[0] + 0.5);

  if (n_params(model) == 2) {
    t.xi = bmr / scr.s_max;
    return t;
  }

  const int j = scr.argmax_index - 1;
  t.gamma1 = (data.responders[j] + 0.25) / (data.group_sizes[j] + 0.5);
  if (t.gamma1 <= t.gamma0)
    t.gamma1 = std::min(t.gamma0 + 0.01, 0.5 * (1.0 + t.gamma0));
  t.xi = bmr / ((t.gamma1 - t.gamma0) / (1.0 - t.gamma0));
  if (t.xi >= 0.95 * d_m) t.xi = 0.9 * d_m;

  // The slope-based start can still land outside the support for shallow
  // data (e.g. the Weibull shape bound); repair by shrinking xi and
  // raising gamma1 toward 1.
  for (int tries = 0; tries < 200 && !theta_in_support(model, t, bmr, d_m); ++tries) {
    t.xi = std::max(t.xi * 0.8, 1e-4);
    t.gamma1 += 0.05 * (1.0 - t.gamma1);
  }
  return t;
}

double log_unnormalized_posterior(const QuantalDataset& data, ModelId model,
                                  const ThetaVector& theta, const PriorSpec& priors, double bmr) {
  if (!theta_in_support(model, theta, bmr, data.doses.back())) return kLogZero;
  const double ll = log_likelihood(data, model, theta, bmr);
  if (ll <= kLogZero) return kLogZero;
  return ll + log_prior(priors, model, theta);
}

LogDensity make_posterior_density(const QuantalDataset& data, ModelId model,
                                  const PriorSpec& priors, double bmr) {
  const double lc = detail::log_binomial_const(data);
  const double d_m = data.doses.back();
  return [data, model, priors, bmr, lc, d_m](const double* x) {
    ThetaVector t{x[0], x[1], n_params(model) == 3 ? x[2] : 0.0};
    if (!theta_in_support(model, t, bmr, d_m)) return kLogZero;
    const double ll = detail::log_likelihood_core(data, model, t, bmr);
    if (ll <= kLogZero) return kLogZero;
    return ll + lc + log_prior(priors, model, t);
  };
}

Chain run_chain(const QuantalDataset& data, ModelId model, const PriorSpec& priors, double bmr,
                const AmConfig& config) {
  if (!priors.valid()) throw std::invalid_argument("run_chain: invalid priors");
  const ScreenResult scr = screen(data);
  if (!scr.passed) throw std::invalid_argument("run_chain: data failure");
  const ThetaVector t0 = initial_theta(data, scr, model, bmr);

  std::vector<double> init = {t0.xi, t0.gamma0};
  if (n_params(model) == 3) init.push_back(t0.gamma1);

  Chain chain;
  chain.model = model;
  chain.raw = am_sample(make_posterior_density(data, model, priors, bmr), init, config);
  return chain;
}

}  // namespace bmd

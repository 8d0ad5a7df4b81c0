#ifndef BMD_AVERAGING_HPP
#define BMD_AVERAGING_HPP

#include <cstdint>
#include <vector>

#include "bmd/diagnostics.hpp"
#include "bmd/sampler.hpp"

namespace bmd {

/// Geometric bridge estimate of the log marginal likelihood from a
/// posterior sample. `draws` is row-major, `count` rows of `dim`. The
/// approximating density g is a multivariate normal fitted to the
/// sample's mean and covariance; `target` must be the log of prior x
/// likelihood. Throws std::runtime_error if every g-draw lands at zero
/// posterior density.
double bridge_log_marginal(const LogDensity& target, const std::vector<double>& draws, int dim,
                           std::uint64_t seed);

/// Posterior model probabilities from log marginals via log-sum-exp.
/// `prior_probs` empty means uniform. Throws if every marginal is log-zero.
std::vector<double> posterior_model_probs(const std::vector<double>& log_marginals,
                                          const std::vector<double>& prior_probs = {});

/// Per-model summary over the retained (post burn-in) draws.
struct ModelPosterior {
  ModelId model = ModelId::M1_Logistic;
  std::vector<double> xi_draws;  // retained, in chain order
  double bmd_mean = 0.0;         // posterior mean of xi (scaled units)
  double bmdl = 0.0;             // floor(0.05 K*)-th order statistic
  double log_marginal = 0.0;
  double acceptance_rate = 0.0;
  DiagnosticReport diagnostic;
};

/// Discards draws before K0, summarizes xi, and attaches the bridge
/// marginal computed on the retained sample. Diagnostics must have passed.
ModelPosterior model_posterior_summary(const Chain& chain, const DiagnosticReport& report,
                                       const LogDensity& target, std::uint64_t bridge_seed);

/// Weighted average of the per-model posterior means.
double bma_point_estimate(const std::vector<ModelPosterior>& models,
                          const std::vector<double>& weights);

/// Lower `level` point of the mixture empirical cdf of the pooled xi
/// draws: the smallest pooled value at which the weighted cdf reaches
/// `level`, located by bisection to below 2^-13.
double bma_bmdl(const std::vector<ModelPosterior>& models, const std::vector<double>& weights,
                double level = 0.05);

/// Order statistic xi_(floor(0.05 K*)) used for the per-model BMDL.
double lower_percentile_order_stat(std::vector<double> draws, double level = 0.05);

}  // namespace bmd

#endif  // BMD_AVERAGING_HPP

#ifndef BMD_SAMPLER_HPP
#define BMD_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "bmd/models.hpp"
#include "bmd/priors.hpp"
#include "bmd/screen.hpp"

namespace bmd {

struct AmConfig {
  int iterations = 100000;        // K
  double target_acceptance = 0.44;
  double step_exponent = 2.0 / 3.0;  // s_k = k^{-p}
  std::uint64_t seed = 0;
  bool adapt = true;              // false freezes scaling/mean/covariance after k = 1
};

/// Log density of the (unnormalized) target; -infinity outside support.
using LogDensity = std::function<double(const double*)>;

/// Raw output of one adaptive Metropolis run over a generic target of
/// dimension `dim`. Draws are stored row-major, K rows of `dim`.
struct AmChain {
  int dim = 0;
  int iterations = 0;
  std::vector<double> draws;
  std::vector<double> log_densities;
  long acceptance_count = 0;
  std::uint64_t seed = 0;

  const double* draw(int k) const { return draws.data() + static_cast<size_t>(k) * dim; }
  /// One component as a contiguous series.
  std::vector<double> component(int u) const;
};

/// Globally adaptive Metropolis with componentwise scaling. `init` must
/// have positive target density. Deterministic given (target, init, config).
AmChain am_sample(const LogDensity& target, const std::vector<double>& init,
                  const AmConfig& config);

/// Posterior chain for one dose-response model.
struct Chain {
  ModelId model = ModelId::M1_Logistic;
  AmChain raw;

  ThetaVector theta_at(int k) const {
    const double* d = raw.draw(k);
    return {d[0], d[1], raw.dim == 3 ? d[2] : 0.0};
  }
};

/// Data-driven starting point: shrunken background/top-dose proportions
/// and the origin-ray slope inversion for xi, with clamps that repair
/// starts falling outside the model's support.
ThetaVector initial_theta(const QuantalDataset& data, const ScreenResult& screen, ModelId model,
                          double bmr);

/// log likelihood + log prior, or -infinity outside the valid theta region.
double log_unnormalized_posterior(const QuantalDataset& data, ModelId model,
                                  const ThetaVector& theta, const PriorSpec& priors, double bmr);

/// Runs one AM chain on the model's posterior. The screen must have passed.
Chain run_chain(const QuantalDataset& data, ModelId model, const PriorSpec& priors, double bmr,
                const AmConfig& config);

/// The posterior closure used by run_chain; exposed for the bridge
/// sampler, which must evaluate the same target.
LogDensity make_posterior_density(const QuantalDataset& data, ModelId model,
                                  const PriorSpec& priors, double bmr);

}  // namespace bmd

#endif  // BMD_SAMPLER_HPP

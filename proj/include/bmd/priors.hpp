#ifndef BMD_PRIORS_HPP
#define BMD_PRIORS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "bmd/models.hpp"

namespace bmd {

/// Hyperparameters of the independent priors: inverse-gamma on xi, Beta
/// on gamma0 and (three-parameter models) gamma1.
struct PriorSpec {
  double xi_alpha = 0.001, xi_beta = 0.001;
  double g0_a = 0.5, g0_b = 0.5;
  std::optional<std::pair<double, double>> g1_ab;  // set iff n_params = 3

  bool valid() const {
    if (!(xi_alpha > 0 && xi_beta > 0 && g0_a > 0 && g0_b > 0)) return false;
    if (g1_ab && !(g1_ab->first > 0 && g1_ab->second > 0)) return false;
    return true;
  }
};

/// Elicited first quartile and median for one prior.
struct ElicitedQuartiles {
  double q1 = 0.0;
  double q2 = 0.0;
};

struct ElicitationFailure : std::runtime_error {
  double residual;
  ElicitationFailure(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

double ig_log_density(double xi, double alpha, double beta);
double beta_log_density(double p, double a, double b);

/// Result of a quartile-matching solve: hyperparameters plus the achieved
/// half squared L2 residual.
struct ElicitResult {
  double a = 0.0, b = 0.0;
  double residual = 0.0;
};

/// Solves IG(alpha, beta) such that cdf(q1) = 0.25 and cdf(q2) = 0.50.
/// Throws ElicitationFailure if the residual criterion (half L2 norm
/// below 1e-10) cannot be met within the iteration budget.
ElicitResult elicit_inverse_gamma(const ElicitedQuartiles& q);

/// Same for Beta(a, b); requires 0 < q1 < q2 < 1.
ElicitResult elicit_beta(const ElicitedQuartiles& q);

/// Objective defaults: xi ~ IG(0.001, 0.001), gamma ~ Beta(1/2, 1/2).
PriorSpec objective_priors(int n_params);

/// Sum of the component log prior densities at theta.
double log_prior(const PriorSpec& priors, ModelId model, const ThetaVector& theta);

}  // namespace bmd

#endif  // BMD_PRIORS_HPP

#include "bmd/priors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "bmd/rng.hpp"
#include "bmd/special.hpp"

namespace bmd {

double ig_log_density(double xi, double alpha, double beta) {
  return inv_gamma_log_pdf(xi, alpha, beta);
}

double beta_log_density(double p, double a, double b) { return beta_log_pdf(p, a, b); }

namespace {

using Cdf = std::function<double(double x, double a, double b)>;

// Damped Newton on log-parameters for the 2x2 quartile system
//   cdf(q1; a, b) = 0.25,  cdf(q2; a, b) = 0.50.
// Returns true on convergence (half L2 norm of residual < 1e-10).
bool newton_solve(const Cdf& cdf, const ElicitedQuartiles& q, double& a, double& b,
                  double& half_sq_norm, int max_iters) {
  auto resid = [&](double la, double lb, double f[2]) {
    const double pa = std::exp(la), pb = std::exp(lb);
    f[0] = cdf(q.q1, pa, pb) - 0.25;
    f[1] = cdf(q.q2, pa, pb) - 0.50;
  };
  double la = std::log(a), lb = std::log(b);
  double f[2];
  resid(la, lb, f);
  double obj = 0.5 * (f[0] * f[0] + f[1] * f[1]);

  const double tol_norm = 2e-10;  // ||f|| < 2e-10  <=>  half L2 norm < 1e-10
  const double h = 1e-7;
  for (int it = 0; it < max_iters; ++it) {
    const double norm = std::sqrt(2.0 * obj);
    if (norm < tol_norm) break;

    double fp[2], fm[2];
    double J[2][2];
    resid(la + h, lb, fp);
    resid(la - h, lb, fm);
    J[0][0] = (fp[0] - fm[0]) / (2 * h);
    J[1][0] = (fp[1] - fm[1]) / (2 * h);
    resid(la, lb + h, fp);
    resid(la, lb - h, fm);
    J[0][1] = (fp[0] - fm[0]) / (2 * h);
    J[1][1] = (fp[1] - fm[1]) / (2 * h);

    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (!std::isfinite(det) || std::fabs(det) < 1e-300) break;
    const double dla = (J[1][1] * f[0] - J[0][1] * f[1]) / det;
    const double dlb = (J[0][0] * f[1] - J[1][0] * f[0]) / det;

    double step = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 40; ++bt) {
      const double nla = la - step * dla, nlb = lb - step * dlb;
      double nf[2];
      resid(nla, nlb, nf);
      const double nobj = 0.5 * (nf[0] * nf[0] + nf[1] * nf[1]);
      if (std::isfinite(nobj) && nobj < obj) {
        la = nla;
        lb = nlb;
        f[0] = nf[0];
        f[1] = nf[1];
        obj = nobj;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  a = std::exp(la);
  b = std::exp(lb);
  half_sq_norm = obj;
  return std::sqrt(2.0 * obj) < tol_norm;
}

ElicitResult solve_with_restarts(const Cdf& cdf, const ElicitedQuartiles& q, double a0, double b0,
                                 const char* what) {
  Rng rng(0x9d1c0ffee1234567ULL);  // deterministic restart perturbations
  double best_res = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= 5; ++attempt) {
    double a = a0, b = b0;
    if (attempt > 0) {
      a = a0 * std::exp(0.5 * rng.normal());
      b = b0 * std::exp(0.5 * rng.normal());
    }
    double res = 0.0;
    if (newton_solve(cdf, q, a, b, res, 2000)) return {a, b, res};
    best_res = std::min(best_res, res);
  }
  throw ElicitationFailure(std::string(what) + ": quartile-matching solver did not converge",
                           best_res);
}

}  // namespace

ElicitResult elicit_inverse_gamma(const ElicitedQuartiles& q) {
  if (!(q.q1 > 0.0 && q.q1 < q.q2))
    throw std::domain_error("elicit_inverse_gamma: need 0 < q1 < q2");
  // alpha = 1 gives cdf(x) = exp(-beta/x); match the median for a start.
  const double a0 = 1.0;
  const double b0 = q.q2 * std::log(2.0);
  return solve_with_restarts(
      [](double x, double a, double b) { return inv_gamma_cdf(x, a, b); }, q, a0, b0,
      "elicit_inverse_gamma");
}

ElicitResult elicit_beta(const ElicitedQuartiles& q) {
  if (!(q.q1 > 0.0 && q.q1 < q.q2 && q.q2 < 1.0))
    throw std::domain_error("elicit_beta: need 0 < q1 < q2 < 1");
  // Normal-approximation moment match for a starting point.
  const double mean = std::clamp(q.q2, 1e-4, 1.0 - 1e-4);
  const double sigma = std::max((q.q2 - q.q1) / 0.6745, 1e-3);
  double nu = mean * (1.0 - mean) / (sigma * sigma) - 1.0;
  if (!(nu > 0.1)) nu = 0.1;
  const double a0 = std::max(mean * nu, 1e-3);
  const double b0 = std::max((1.0 - mean) * nu, 1e-3);
  return solve_with_restarts([](double x, double a, double b) { return beta_cdf(x, a, b); }, q,
                             a0, b0, "elicit_beta");
}

PriorSpec objective_priors(int np) {
  if (np != 2 && np != 3) throw std::domain_error("objective_priors: n_params must be 2 or 3");
  PriorSpec p;
  p.xi_alpha = 0.001;
  p.xi_beta = 0.001;
  p.g0_a = 0.5;
  p.g0_b = 0.5;
  if (np == 3) p.g1_ab = std::make_pair(0.5, 0.5);
  return p;
}

double log_prior(const PriorSpec& priors, ModelId model, const ThetaVector& theta) {
  double lp = ig_log_density(theta.xi, priors.xi_alpha, priors.xi_beta) +
              beta_log_density(theta.gamma0, priors.g0_a, priors.g0_b);
  if (n_params(model) == 3) {
    if (!priors.g1_ab) throw std::invalid_argument("log_prior: missing gamma1 prior");
    lp += beta_log_density(theta.gamma1, priors.g1_ab->first, priors.g1_ab->second);
  }
  return lp;
}

}  // namespace bmd

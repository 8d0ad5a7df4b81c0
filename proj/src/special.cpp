#include "bmd/special.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>

namespace bmd {

namespace {
const boost::math::normal_distribution<double> kStdNormal(0.0, 1.0);
}

double norm_cdf(double x) { return boost::math::cdf(kStdNormal, x); }

double norm_quantile(double p) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("norm_quantile: p outside (0,1)");
  return boost::math::quantile(kStdNormal, p);
}

double log_gamma(double a) { return boost::math::lgamma(a); }

double gamma_p(double a, double x) { return boost::math::gamma_p(a, x); }
double gamma_q(double a, double x) { return boost::math::gamma_q(a, x); }
double beta_inc(double a, double b, double x) { return boost::math::ibeta(a, b, x); }

double inv_gamma_log_pdf(double x, double alpha, double beta) {
  if (x <= 0.0) throw std::domain_error("inv_gamma_log_pdf: x must be positive");
  return alpha * std::log(beta) - log_gamma(alpha) - (alpha + 1.0) * std::log(x) - beta / x;
}

double inv_gamma_cdf(double x, double alpha, double beta) {
  if (x <= 0.0) return 0.0;
  // X ~ IG(alpha, beta) iff 1/X ~ Gamma(alpha, rate beta)
  return gamma_q(alpha, beta / x);
}

double inv_gamma_quantile(double p, double alpha, double beta) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("inv_gamma_quantile: p outside (0,1)");
  const double g = boost::math::gamma_q_inv(alpha, p);
  return beta / g;
}

double beta_log_pdf(double x, double a, double b) {
  if (x <= 0.0 || x >= 1.0) throw std::domain_error("beta_log_pdf: x outside (0,1)");
  return log_gamma(a + b) - log_gamma(a) - log_gamma(b) + (a - 1.0) * std::log(x) +
         (b - 1.0) * std::log1p(-x);
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return beta_inc(a, b, x);
}

double beta_quantile(double p, double a, double b) {
  if (p <= 0.0 || p >= 1.0) throw std::domain_error("beta_quantile: p outside (0,1)");
  return boost::math::ibeta_inv(a, b, p);
}

double log_choose(int n, int k) {
  return log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0);
}

}  // namespace bmd

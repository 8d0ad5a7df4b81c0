#ifndef BMD_SPECIAL_HPP
#define BMD_SPECIAL_HPP

#include <limits>

namespace bmd {

// Sentinel for log(0); comparisons against it must use <=.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// Standard normal cdf and quantile.
double norm_cdf(double x);
double norm_quantile(double p);

double log_gamma(double a);

// Regularized incomplete gamma P(a, x) and incomplete beta I_x(a, b).
double gamma_p(double a, double x);
double gamma_q(double a, double x);
double beta_inc(double a, double b, double x);

// Inverse-gamma(alpha, beta) distribution for the BMD parameter.
double inv_gamma_log_pdf(double x, double alpha, double beta);
double inv_gamma_cdf(double x, double alpha, double beta);
double inv_gamma_quantile(double p, double alpha, double beta);

// Beta(a, b) distribution for the probability parameters.
double beta_log_pdf(double x, double a, double b);
double beta_cdf(double x, double a, double b);
double beta_quantile(double p, double a, double b);

double log_choose(int n, int k);

}  // namespace bmd

#endif  // BMD_SPECIAL_HPP

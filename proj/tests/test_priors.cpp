#include <doctest.h>

#include <cmath>

#include "bmd/priors.hpp"
#include "bmd/special.hpp"

using namespace bmd;

TEST_CASE("inverse-gamma elicitation reproduces the reference hyperparameters") {
  const auto r = elicit_inverse_gamma({0.18, 0.5});
  CHECK(std::abs(r.a - 0.53) < 0.01);
  CHECK(std::abs(r.b - 0.13) < 0.01);
  CHECK(r.residual < 1e-10);
  // quartiles are actually matched
  CHECK(inv_gamma_cdf(0.18, r.a, r.b) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(inv_gamma_cdf(0.50, r.a, r.b) == doctest::Approx(0.50).epsilon(1e-8));
}

TEST_CASE("beta elicitation reproduces the reference hyperparameters") {
  const auto r = elicit_beta({0.04, 0.08});
  CHECK(std::abs(r.a - 1.36) < 0.01);
  CHECK(std::abs(r.b - 12.31) < 0.01);
  CHECK(r.residual < 1e-10);
  CHECK(beta_cdf(0.04, r.a, r.b) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(beta_cdf(0.08, r.a, r.b) == doctest::Approx(0.50).epsilon(1e-8));
}

TEST_CASE("uniform quartiles solve to Beta(1, 1)") {
  const auto r = elicit_beta({0.25, 0.5});
  CHECK(r.a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.b == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("elicitation round trips through the quantile functions") {
  for (auto [a, b] : {std::pair{2.0, 5.0}, std::pair{0.7, 0.7}, std::pair{4.0, 1.5}}) {
    const double q1 = beta_quantile(0.25, a, b);
    const double q2 = beta_quantile(0.50, a, b);
    const auto r = elicit_beta({q1, q2});
    CHECK(r.a == doctest::Approx(a).epsilon(1e-5));
    CHECK(r.b == doctest::Approx(b).epsilon(1e-5));
  }
  for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{0.8, 0.2}, std::pair{5.0, 3.0}}) {
    const double q1 = inv_gamma_quantile(0.25, a, b);
    const double q2 = inv_gamma_quantile(0.50, a, b);
    const auto r = elicit_inverse_gamma({q1, q2});
    CHECK(r.a == doctest::Approx(a).epsilon(1e-5));
    CHECK(r.b == doctest::Approx(b).epsilon(1e-5));
  }
}

TEST_CASE("invalid quartiles are rejected") {
  CHECK_THROWS(elicit_beta({0.5, 0.25}));   // q1 >= q2
  CHECK_THROWS(elicit_beta({0.0, 0.5}));
  CHECK_THROWS(elicit_beta({0.4, 1.1}));
  CHECK_THROWS(elicit_inverse_gamma({-1.0, 0.5}));
  CHECK_THROWS(elicit_inverse_gamma({0.5, 0.5}));
}

TEST_CASE("objective priors") {
  const auto p2 = objective_priors(2);
  CHECK(p2.xi_alpha == doctest::Approx(0.001));
  CHECK(p2.xi_beta == doctest::Approx(0.001));
  CHECK(p2.g0_a == doctest::Approx(0.5));
  CHECK(!p2.g1_ab.has_value());
  const auto p3 = objective_priors(3);
  REQUIRE(p3.g1_ab.has_value());
  CHECK(p3.g1_ab->first == doctest::Approx(0.5));
  CHECK(p3.g1_ab->second == doctest::Approx(0.5));
}

TEST_CASE("log prior sums the component densities") {
  PriorSpec p;
  p.xi_alpha = 2.0;
  p.xi_beta = 1.0;
  p.g0_a = 1.36;
  p.g0_b = 12.31;
  p.g1_ab = {0.5, 0.5};
  const ThetaVector t{0.3, 0.1, 0.6};
  const double expect2 = ig_log_density(0.3, 2.0, 1.0) + beta_log_density(0.1, 1.36, 12.31);
  CHECK(log_prior(p, ModelId::M1_Logistic, t) == doctest::Approx(expect2).epsilon(1e-12));
  const double expect3 = expect2 + beta_log_density(0.6, 0.5, 0.5);
  CHECK(log_prior(p, ModelId::M6_LogLogistic, t) == doctest::Approx(expect3).epsilon(1e-12));
}

TEST_CASE("density functions match direct formulas") {
  // IG(2, 3) at x = 1.5: alpha log beta - lgamma(alpha) - (alpha+1) log x - beta/x
  const double expect = 2 * std::log(3.0) - std::lgamma(2.0) - 3 * std::log(1.5) - 2.0;
  CHECK(ig_log_density(1.5, 2.0, 3.0) == doctest::Approx(expect).epsilon(1e-12));
  // Beta(2, 5) integrates its quantiles consistently
  CHECK(beta_cdf(beta_quantile(0.37, 2, 5), 2, 5) == doctest::Approx(0.37).epsilon(1e-10));
}

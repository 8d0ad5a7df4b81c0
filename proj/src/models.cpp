#include "bmd/models.hpp"

#include <cmath>
#include <stdexcept>

#include "bmd/special.hpp"

namespace bmd {

namespace {

double logit(double p) { return std::log(p / (1.0 - p)); }
double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace

namespace detail {

// Implied traditional coefficients, no constraint validation.
BetaVector implied_beta(ModelId model, const ThetaVector& t, double bmr, double d_m) {
  BetaVector b;
  const double xi = t.xi, g0 = t.gamma0, g1 = t.gamma1;
  switch (model) {
    case ModelId::M1_Logistic: {
      const double b0 = logit(g0);
      b.c = {b0, std::log((1.0 + bmr * std::exp(-b0)) / (1.0 - bmr)) / xi, 0.0};
      b.size = 2;
      break;
    }
    case ModelId::M2_Probit: {
      const double b0 = norm_quantile(g0);
      b.c = {b0, (norm_quantile(bmr * (1.0 - g0) + g0) - b0) / xi, 0.0};
      b.size = 2;
      break;
    }
    case ModelId::M3_QuantalLinear:
      b.c = {-std::log1p(-g0), -std::log1p(-bmr) / xi, 0.0};
      b.size = 2;
      break;
    case ModelId::M4_QuantalQuadratic:
      b.c = {g0, -std::log1p(-bmr) / (xi * xi), 0.0};
      b.size = 2;
      break;
    case ModelId::M5_TwoStage: {
      const double G5 = std::log((1.0 - g1) / (1.0 - g0));
      const double C5 = -std::log1p(-bmr);
      const double denom = xi * d_m * (xi - d_m);
      b.c = {-std::log1p(-g0),
             (C5 * d_m * d_m + G5 * xi * xi) / (-denom),
             (G5 * xi + C5 * d_m) / denom};
      b.size = 3;
      break;
    }
    case ModelId::M6_LogLogistic: {
      const double a = std::log((g1 - g0) / (1.0 - g1));  // logit of risk fraction at d_m
      const double c = std::log(bmr / (1.0 - bmr));
      const double b1 = (a - c) / (std::log(d_m) - std::log(xi));
      b.c = {g0, c - b1 * std::log(xi), b1};
      b.size = 3;
      break;
    }
    case ModelId::M7_LogProbit: {
      const double a = norm_quantile((g1 - g0) / (1.0 - g0));
      const double c = norm_quantile(bmr);
      const double b1 = (a - c) / (std::log(d_m) - std::log(xi));
      b.c = {g0, c - b1 * std::log(xi), b1};
      b.size = 3;
      break;
    }
    case ModelId::M8_Weibull: {
      const double a = std::log(-std::log((1.0 - g1) / (1.0 - g0)));
      const double c = std::log(-std::log1p(-bmr));
      const double b1 = (a - c) / (std::log(d_m) - std::log(xi));
      b.c = {g0, c - b1 * std::log(xi), b1};
      b.size = 3;
      break;
    }
  }
  return b;
}

}  // namespace detail

namespace {

void check_beta(ModelId model, const BetaVector& b) {
  switch (model) {
    case ModelId::M1_Logistic:
    case ModelId::M2_Probit:
      break;
    case ModelId::M3_QuantalLinear:
      require(b.c[0] >= 0.0, "M3: beta0 must be nonnegative");
      require(b.c[1] >= 0.0, "M3: beta1 must be nonnegative");
      break;
    case ModelId::M4_QuantalQuadratic:
      require(b.c[0] >= 0.0 && b.c[0] < 1.0, "M4: gamma0 must be in [0,1)");
      require(b.c[1] >= 0.0, "M4: beta1 must be nonnegative");
      break;
    case ModelId::M5_TwoStage:
      require(b.c[0] >= 0.0, "M5: beta0 must be nonnegative");
      require(b.c[1] >= 0.0, "M5: beta1 must be nonnegative");
      require(b.c[2] >= 0.0, "M5: beta2 must be nonnegative");
      break;
    case ModelId::M6_LogLogistic:
      require(b.c[0] >= 0.0 && b.c[0] < 1.0, "M6: gamma0 must be in [0,1)");
      require(b.c[2] >= 0.0, "M6: beta1 must be nonnegative");
      break;
    case ModelId::M7_LogProbit:
      require(b.c[0] >= 0.0 && b.c[0] < 1.0, "M7: gamma0 must be in [0,1)");
      require(b.c[2] >= 0.0, "M7: beta1 must be nonnegative");
      break;
    case ModelId::M8_Weibull:
      require(b.c[0] >= 0.0 && b.c[0] < 1.0, "M8: gamma0 must be in [0,1)");
      require(b.c[2] >= 1.0, "M8: beta1 must be at least 1");
      break;
  }
}

}  // namespace

int n_params(ModelId m) { return model_index(m) <= 4 ? 2 : 3; }

int model_index(ModelId m) { return static_cast<int>(m); }

std::string model_code(ModelId m) { return "M" + std::to_string(model_index(m)); }

std::string model_name(ModelId m) {
  switch (m) {
    case ModelId::M1_Logistic: return "Logistic";
    case ModelId::M2_Probit: return "Probit";
    case ModelId::M3_QuantalLinear: return "Quantal-Linear";
    case ModelId::M4_QuantalQuadratic: return "Quantal-Quadratic";
    case ModelId::M5_TwoStage: return "Two-Stage";
    case ModelId::M6_LogLogistic: return "Log-Logistic";
    case ModelId::M7_LogProbit: return "Log-Probit";
    case ModelId::M8_Weibull: return "Weibull";
  }
  return "?";
}

std::optional<ModelId> model_from_code(const std::string& code) {
  for (ModelId m : kAllModels)
    if (model_code(m) == code) return m;
  return std::nullopt;
}

bool theta_box_valid(ModelId model, const ThetaVector& t, double d_m) {
  if (!(t.xi > 0.0) || !(t.gamma0 > 0.0) || !(t.gamma0 < 1.0)) return false;
  if (n_params(model) == 3) {
    if (!(t.gamma1 > t.gamma0) || !(t.gamma1 < 1.0)) return false;
    if (!(t.xi < d_m)) return false;
  }
  return true;
}

bool theta_in_support(ModelId model, const ThetaVector& t, double bmr, double d_m) {
  if (!theta_box_valid(model, t, d_m)) return false;
  if (n_params(model) == 2) return true;

  // risk fraction at the top dose; must exceed the BMR for the implied
  // curve to be increasing with xi < d_m
  const double p1 = (t.gamma1 - t.gamma0) / (1.0 - t.gamma0);
  if (!(p1 > bmr)) return false;

  switch (model) {
    case ModelId::M5_TwoStage: {
      const double G5 = std::log((1.0 - t.gamma1) / (1.0 - t.gamma0));  // < 0
      const double C5 = -std::log1p(-bmr);
      if (!(G5 * t.xi + C5 * d_m <= 0.0)) return false;                 // beta2 >= 0
      if (!(C5 * d_m * d_m + G5 * t.xi * t.xi >= 0.0)) return false;    // beta1 >= 0
      return true;
    }
    case ModelId::M8_Weibull: {
      const double a = std::log(-std::log((1.0 - t.gamma1) / (1.0 - t.gamma0)));
      const double c = std::log(-std::log1p(-bmr));
      return a - c >= std::log(d_m) - std::log(t.xi);                   // beta1 >= 1
    }
    default:
      return true;  // M6, M7: p1 > bmr suffices
  }
}

double risk_traditional(ModelId model, const BetaVector& beta, double d) {
  require(d >= 0.0, "risk_traditional: dose must be nonnegative");
  check_beta(model, beta);
  const auto& c = beta.c;
  switch (model) {
    case ModelId::M1_Logistic:
      return logistic(c[0] + c[1] * d);
    case ModelId::M2_Probit:
      return norm_cdf(c[0] + c[1] * d);
    case ModelId::M3_QuantalLinear:
      return 1.0 - std::exp(-c[0] - c[1] * d);
    case ModelId::M4_QuantalQuadratic:
      return c[0] + (1.0 - c[0]) * (1.0 - std::exp(-c[1] * d * d));
    case ModelId::M5_TwoStage:
      return 1.0 - std::exp(-c[0] - c[1] * d - c[2] * d * d);
    case ModelId::M6_LogLogistic:
      if (d == 0.0) return c[0];
      return c[0] + (1.0 - c[0]) * logistic(c[1] + c[2] * std::log(d));
    case ModelId::M7_LogProbit:
      if (d == 0.0) return c[0];
      return c[0] + (1.0 - c[0]) * norm_cdf(c[1] + c[2] * std::log(d));
    case ModelId::M8_Weibull:
      if (d == 0.0) return c[0];
      return c[0] + (1.0 - c[0]) * (1.0 - std::exp(-std::exp(c[1]) * std::pow(d, c[2])));
  }
  return 0.0;
}

double bmd_from_beta(ModelId model, const BetaVector& beta, double bmr) {
  require(bmr > 0.0 && bmr < 1.0, "bmd_from_beta: bmr outside (0,1)");
  const auto& c = beta.c;
  switch (model) {
    case ModelId::M1_Logistic:
      require(c[1] != 0.0, "M1: beta1 = 0 has no finite BMD");
      return std::log((1.0 + bmr * std::exp(-c[0])) / (1.0 - bmr)) / c[1];
    case ModelId::M2_Probit:
      require(c[1] != 0.0, "M2: beta1 = 0 has no finite BMD");
      return (norm_quantile((1.0 - norm_cdf(c[0])) * bmr + norm_cdf(c[0])) - c[0]) / c[1];
    case ModelId::M3_QuantalLinear:
      require(c[1] != 0.0, "M3: beta1 = 0 has no finite BMD");
      return -std::log1p(-bmr) / c[1];
    case ModelId::M4_QuantalQuadratic:
      require(c[1] != 0.0, "M4: beta1 = 0 has no finite BMD");
      return std::sqrt(-std::log1p(-bmr) / c[1]);
    case ModelId::M5_TwoStage: {
      const double l = std::log1p(-bmr);
      if (c[2] == 0.0) {
        require(c[1] != 0.0, "M5: beta1 = beta2 = 0 has no finite BMD");
        return -l / c[1];
      }
      return (-c[1] + std::sqrt(c[1] * c[1] - 4.0 * c[2] * l)) / (2.0 * c[2]);
    }
    case ModelId::M6_LogLogistic:
      require(c[2] != 0.0, "M6: beta1 = 0 has no finite BMD");
      return std::exp((std::log(bmr / (1.0 - bmr)) - c[1]) / c[2]);
    case ModelId::M7_LogProbit:
      require(c[2] != 0.0, "M7: beta1 = 0 has no finite BMD");
      return std::exp((norm_quantile(bmr) - c[1]) / c[2]);
    case ModelId::M8_Weibull:
      require(c[2] != 0.0, "M8: beta1 = 0 has no finite BMD");
      return std::exp((std::log(-std::log1p(-bmr)) - c[1]) / c[2]);
  }
  return 0.0;
}

double risk_reparam(ModelId model, const ThetaVector& t, double d, double bmr, double d_m) {
  require(bmr > 0.0 && bmr < 1.0, "risk_reparam: bmr outside (0,1)");
  require(d >= 0.0, "risk_reparam: dose must be nonnegative");
  if (n_params(model) == 3) {
    require(t.xi != d_m, "risk_reparam: xi = d_m is a singular point");
    require(theta_in_support(model, t, bmr, d_m),
            "risk_reparam: theta outside the valid (monotone) region");
  } else {
    require(theta_box_valid(model, t, d_m), "risk_reparam: invalid theta");
  }
  const double xi = t.xi, g0 = t.gamma0, g1 = t.gamma1;
  switch (model) {
    case ModelId::M1_Logistic:
      return logistic(logit(g0) +
                      (d / xi) * std::log((1.0 + std::exp(-logit(g0)) * bmr) / (1.0 - bmr)));
    case ModelId::M2_Probit: {
      const double z0 = norm_quantile(g0);
      return norm_cdf(z0 + (norm_quantile(bmr * (1.0 - g0) + g0) - z0) * d / xi);
    }
    case ModelId::M3_QuantalLinear:
      return 1.0 - std::exp(std::log1p(-g0) + std::log1p(-bmr) * d / xi);
    case ModelId::M4_QuantalQuadratic:
      return g0 + (1.0 - g0) * (1.0 - std::exp(std::log1p(-bmr) * d * d / (xi * xi)));
    case ModelId::M5_TwoStage: {
      const double G5 = std::log((1.0 - g1) / (1.0 - g0));
      const double C5 = -std::log1p(-bmr);
      const double e = (C5 * d_m * d * (d_m - d) + G5 * xi * d * (xi - d)) / (xi * d_m * (xi - d_m));
      return g0 + (1.0 - g0) * (1.0 - std::exp(e));
    }
    case ModelId::M6_LogLogistic: {
      if (d == 0.0) return g0;
      const double G6 = std::log((1.0 - g1) / (g1 - g0));
      const double C6 = std::log(bmr / (1.0 - bmr));
      const double Lm = std::log(d_m), Ld = std::log(d), Lx = std::log(xi);
      const double e = (C6 * (Lm - Ld) + G6 * (Lx - Ld)) / (Lx - Lm);
      return g0 + (1.0 - g0) * logistic(-e);
    }
    case ModelId::M7_LogProbit: {
      if (d == 0.0) return g0;
      const double G7 = norm_quantile((g1 - g0) / (1.0 - g0));
      const double C7 = norm_quantile(bmr);
      const double Lm = std::log(d_m), Ld = std::log(d), Lx = std::log(xi);
      return g0 + (1.0 - g0) * norm_cdf((C7 * (Lm - Ld) + G7 * (Ld - Lx)) / (Lm - Lx));
    }
    case ModelId::M8_Weibull: {
      if (d == 0.0) return g0;
      const double G8 = std::log(-std::log((1.0 - g1) / (1.0 - g0)));
      const double C8 = std::log(-std::log1p(-bmr));
      const double Lm = std::log(d_m), Ld = std::log(d), Lx = std::log(xi);
      const double e = (C8 * (Lm - Ld) + G8 * (Ld - Lx)) / (Lm - Lx);
      return g0 + (1.0 - g0) * (1.0 - std::exp(-std::exp(e)));
    }
  }
  return 0.0;
}

BetaVector reparam_to_beta(ModelId model, const ThetaVector& t, double bmr, double d_m) {
  require(bmr > 0.0 && bmr < 1.0, "reparam_to_beta: bmr outside (0,1)");
  require(t.xi > 0.0, "reparam_to_beta: xi must be positive");
  require(t.gamma0 > 0.0 && t.gamma0 < 1.0, "reparam_to_beta: gamma0 outside (0,1)");
  if (n_params(model) == 3) {
    require(t.gamma1 > t.gamma0 && t.gamma1 < 1.0,
            "reparam_to_beta: gamma1 must lie in (gamma0, 1)");
    require(t.xi != d_m, "reparam_to_beta: xi = d_m is a singular point");
  }
  BetaVector b = detail::implied_beta(model, t, bmr, d_m);
  check_beta(model, b);
  return b;
}

double extra_risk(ModelId model, const ThetaVector& t, double d, double bmr, double d_m) {
  require(t.gamma0 < 1.0, "extra_risk: degenerate background gamma0 = 1");
  const double r0 = t.gamma0;  // R(0) = gamma0 by construction for every model
  const double r = risk_reparam(model, t, d, bmr, d_m);
  return (r - r0) / (1.0 - r0);
}

namespace detail {

double log_likelihood_core(const QuantalDataset& data, ModelId model, const ThetaVector& theta,
                           double bmr) {
  constexpr double lo = 1e-300;
  constexpr double hi = 1.0 - 1e-16;
  double ll = 0.0;
  const int m = data.groups();
  for (int i = 0; i < m; ++i) {
    double r = risk_reparam(model, theta, data.doses[i], bmr);
    if (!std::isfinite(r)) return kLogZero;
    const int y = data.responders[i];
    const int n = data.group_sizes[i];
    // clamp saturated risks so interior points keep finite likelihood
    if (r < lo) r = lo;
    if (r > hi) r = hi;
    ll += y * std::log(r) + (n - y) * std::log1p(-r);
  }
  return ll;
}

double log_binomial_const(const QuantalDataset& data) {
  double s = 0.0;
  for (int i = 0; i < data.groups(); ++i)
    s += log_choose(data.group_sizes[i], data.responders[i]);
  return s;
}

}  // namespace detail

double log_likelihood(const QuantalDataset& data, ModelId model, const ThetaVector& theta,
                      double bmr) {
  const double core = detail::log_likelihood_core(data, model, theta, bmr);
  if (core <= kLogZero) return kLogZero;
  return core + detail::log_binomial_const(data);
}

}  // namespace bmd

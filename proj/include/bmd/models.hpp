#ifndef BMD_MODELS_HPP
#define BMD_MODELS_HPP

#include <array>
#include <optional>
#include <string>

#include "bmd/dataset.hpp"

namespace bmd {

enum class ModelId {
  M1_Logistic = 1,
  M2_Probit,
  M3_QuantalLinear,
  M4_QuantalQuadratic,
  M5_TwoStage,
  M6_LogLogistic,
  M7_LogProbit,
  M8_Weibull,
};

constexpr std::array<ModelId, 8> kAllModels = {
    ModelId::M1_Logistic,        ModelId::M2_Probit,     ModelId::M3_QuantalLinear,
    ModelId::M4_QuantalQuadratic, ModelId::M5_TwoStage,  ModelId::M6_LogLogistic,
    ModelId::M7_LogProbit,       ModelId::M8_Weibull};

int n_params(ModelId m);                    // 2 for M1-M4, 3 for M5-M8
int model_index(ModelId m);                 // 1..8
std::string model_code(ModelId m);          // "M1".."M8"
std::string model_name(ModelId m);          // "Logistic" etc.
std::optional<ModelId> model_from_code(const std::string& code);

/// Traditional regression-style coefficients. Layout per model:
///   M1, M2:   (b0, b1)        M3: (b0, b1)       M4: (g0, b1)
///   M5:       (b0, b1, b2)    M6-M8: (g0, b0, b1)
struct BetaVector {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int size = 2;
};

/// Reparameterized parameters: BMD (xi, scaled dose units), background
/// risk gamma0, and for three-parameter models the risk at the highest
/// dose gamma1.
struct ThetaVector {
  double xi = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;  // meaningful only when the model has 3 parameters
};

/// Checks the basic box constraints on theta for the given model
/// (xi > 0, 0 < gamma0 < 1, gamma1 in (gamma0, 1) and xi < d_m for the
/// three-parameter models). Does not check the implied-beta constraints;
/// see theta_in_support for the full validity test.
bool theta_box_valid(ModelId model, const ThetaVector& theta, double d_m = 1.0);

/// Full support test used by the sampler: box constraints plus the
/// per-model constraints on the implied traditional coefficients
/// (e.g. nonnegative slopes for M5-M7, Weibull shape >= 1 for M8).
bool theta_in_support(ModelId model, const ThetaVector& theta, double bmr, double d_m = 1.0);

/// R(d) in the traditional parameterization. Throws std::domain_error if
/// beta violates the model's constraints or d < 0. M6-M8 at d = 0 return
/// the limit value.
double risk_traditional(ModelId model, const BetaVector& beta, double d);

/// Closed-form BMD from traditional coefficients. Throws on a zero
/// coefficient that would be divided through.
double bmd_from_beta(ModelId model, const BetaVector& beta, double bmr);

/// R(d) in the reparameterized form. Throws std::domain_error on invalid
/// theta (including xi = d_m singularities and non-monotone implied
/// curves).
double risk_reparam(ModelId model, const ThetaVector& theta, double d, double bmr,
                    double d_m = 1.0);

/// Maps theta to the traditional coefficients. Throws std::domain_error
/// if an implied coefficient falls outside the model's constraint set,
/// naming the offending coefficient.
BetaVector reparam_to_beta(ModelId model, const ThetaVector& theta, double bmr, double d_m = 1.0);

/// (R(d) - R(0)) / (1 - R(0)).
double extra_risk(ModelId model, const ThetaVector& theta, double d, double bmr,
                  double d_m = 1.0);

/// Binomial log-likelihood including the binomial coefficients. Risk
/// values are clamped away from 0 and 1 inside this function only; an
/// exact impossible configuration returns -infinity.
double log_likelihood(const QuantalDataset& data, ModelId model, const ThetaVector& theta,
                      double bmr);

namespace detail {
// Coefficient-free likelihood and the constant term, split so hot loops
// can cache the constant.
double log_likelihood_core(const QuantalDataset& data, ModelId model, const ThetaVector& theta,
                           double bmr);
double log_binomial_const(const QuantalDataset& data);
// Theta -> beta without constraint validation.
BetaVector implied_beta(ModelId model, const ThetaVector& theta, double bmr, double d_m);
}  // namespace detail

}  // namespace bmd

#endif  // BMD_MODELS_HPP

#ifndef BMD_PIPELINE_HPP
#define BMD_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bmd/averaging.hpp"
#include "bmd/dataset.hpp"
#include "bmd/diagnostics.hpp"
#include "bmd/priors.hpp"
#include "bmd/sampler.hpp"
#include "bmd/screen.hpp"

namespace bmd {

struct AnalysisConfig {
  double bmr = 0.10;
  double credible_level = 0.95;
  int iterations = 100000;
  std::uint64_t seed = 0;
  std::vector<ModelId> models{kAllModels.begin(), kAllModels.end()};
  PriorSpec priors2;  // used for 2-parameter models (no gamma1 entry)
  PriorSpec priors3;  // used for 3-parameter models
  int max_restarts = 5;
  bool parallel = true;   // fan models out over OpenMP threads
  bool force_ar = false;  // AR-only spectral estimates (deterministic tests)

  AnalysisConfig() {
    priors2 = objective_priors(2);
    priors3 = objective_priors(3);
  }
};

struct ModelOutcome {
  ModelId model = ModelId::M1_Logistic;
  bool converged = false;
  int restarts_used = 0;
  std::optional<ModelPosterior> posterior;  // absent on algorithm failure
};

struct BmaReport {
  ScreenResult screen;
  bool data_failure = false;
  std::vector<ModelOutcome> outcomes;      // one per requested model
  std::vector<double> weights;             // aligned with included()
  double bma_bmd = 0.0;                    // scaled units
  double bma_bmdl = 0.0;                   // scaled units
  double dose_scale = 1.0;
  double bmr = 0.10;
  double credible_level = 0.95;

  std::vector<const ModelPosterior*> included() const;
  bool any_converged() const;
};

/// Full pipeline: screen -> per-model sample/diagnose (with restarts) ->
/// bridge marginals -> weights -> BMA estimates. Models failing all
/// diagnostic restarts are excluded and the weights renormalized over the
/// survivors. On data failure only `screen` and `data_failure` are set.
BmaReport run_analysis(const QuantalDataset& data, const AnalysisConfig& config);

/// Samples one model with the restart ladder. Returns the outcome (chain
/// summary or algorithm failure); never throws for convergence problems.
ModelOutcome analyze_model(const QuantalDataset& data, ModelId model,
                           const AnalysisConfig& config);

/// JSON serialization of the report (doses in original units).
std::string report_to_json(const BmaReport& report, const AnalysisConfig& config);

/// Aligned text table mirroring the per-model BMD/BMDL/weight layout.
std::string report_to_table(const BmaReport& report);

}  // namespace bmd

#endif  // BMD_PIPELINE_HPP

#ifndef BMD_SIMULATE_HPP
#define BMD_SIMULATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmd/pipeline.hpp"

namespace bmd {

enum class SimPattern { PI, PII };

/// Generating parameters (xi, gamma0, gamma1) for one model under a
/// named dose-response pattern.
ThetaVector generating_theta(ModelId model, SimPattern pattern);

struct SimConfig {
  ModelId generating_model = ModelId::M6_LogLogistic;
  SimPattern pattern = SimPattern::PI;
  int per_dose_n = 50;
  int replicates = 200;          // desk scale; the full study used 2000
  std::vector<double> doses{0.0, 0.25, 0.5, 1.0};
  double bmr = 0.10;
  int iterations = 20000;        // desk scale; full scale is 100000
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct SimReplicate {
  int index = 0;
  bool data_failure = false;
  // per-model BMDLs keyed by model code; absent on algorithm failure
  std::map<std::string, double> model_bmdl;
  std::optional<double> bma_bmdl;
};

struct SimEstimatorSummary {
  std::string estimator;  // "M1".."M8" or "BMA"
  int count = 0;
  double coverage = 0.0;  // fraction of BMDLs below the true xi
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, p95 = 0.0;
};

struct SimResult {
  ThetaVector true_theta;
  std::vector<SimReplicate> replicates;
  std::vector<SimEstimatorSummary> summaries;
  int data_failures = 0;
  int algorithm_failures = 0;  // model-level failures, totalled
};

/// Generates quantal data under the configured model/pattern, runs the
/// full pipeline with objective priors per replicate, and summarizes the
/// per-estimator BMDL distributions.
SimResult run_simulation(const SimConfig& config);

/// One generated dataset (exposed for reproducibility tests).
QuantalDataset generate_dataset(const SimConfig& config, int replicate);

std::string simulation_to_json(const SimResult& result, const SimConfig& config);
std::string simulation_to_table(const SimResult& result);

}  // namespace bmd

#endif  // BMD_SIMULATE_HPP

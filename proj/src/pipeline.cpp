#include "bmd/pipeline.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "bmd/rng.hpp"

namespace bmd {

std::vector<const ModelPosterior*> BmaReport::included() const {
  std::vector<const ModelPosterior*> out;
  for (const auto& o : outcomes)
    if (o.converged && o.posterior) out.push_back(&*o.posterior);
  return out;
}

bool BmaReport::any_converged() const { return !included().empty(); }

ModelOutcome analyze_model(const QuantalDataset& data, ModelId model,
                           const AnalysisConfig& config) {
  ModelOutcome out;
  out.model = model;

  const PriorSpec& priors = n_params(model) == 3 ? config.priors3 : config.priors2;
  const std::uint64_t base = derive_seed(config.seed, static_cast<std::uint64_t>(model_index(model)));

  AmConfig am;
  am.iterations = config.iterations;

  for (int restart = 0; restart <= config.max_restarts; ++restart) {
    am.seed = derive_seed(base, static_cast<std::uint64_t>(restart));
    const Chain chain = run_chain(data, model, priors, config.bmr, am);
    DiagnosticReport report = select_burn_in(chain, config.force_ar);
    report.restarts_used = restart;
    if (report.passed()) {
      const LogDensity target = make_posterior_density(data, model, priors, config.bmr);
      const std::uint64_t bridge_seed = derive_seed(base, 1000u + restart);
      out.posterior = model_posterior_summary(chain, report, target, bridge_seed);
      out.converged = true;
      out.restarts_used = restart;
      return out;
    }
    out.restarts_used = restart;
  }
  return out;  // algorithm failure
}

BmaReport run_analysis(const QuantalDataset& data, const AnalysisConfig& config) {
  if (config.models.empty()) throw std::invalid_argument("run_analysis: no models selected");
  if (!(config.bmr > 0.0 && config.bmr < 1.0))
    throw std::invalid_argument("run_analysis: bmr outside (0,1)");

  BmaReport report;
  report.dose_scale = data.dose_scale;
  report.bmr = config.bmr;
  report.credible_level = config.credible_level;
  report.screen = screen(data);
  if (!report.screen.passed) {
    report.data_failure = true;
    return report;
  }

  const int n = static_cast<int>(config.models.size());
  report.outcomes.resize(n);

  std::vector<std::exception_ptr> errors(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      report.outcomes[i] = analyze_model(data, config.models[i], config);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  const auto included = report.included();
  if (included.empty()) return report;  // algorithm failure for every model

  std::vector<double> log_marginals;
  for (const ModelPosterior* mp : included) log_marginals.push_back(mp->log_marginal);
  report.weights = posterior_model_probs(log_marginals);

  std::vector<ModelPosterior> models;
  for (const ModelPosterior* mp : included) models.push_back(*mp);
  report.bma_bmd = bma_point_estimate(models, report.weights);
  report.bma_bmdl = bma_bmdl(models, report.weights, 1.0 - config.credible_level);
  return report;
}

std::string report_to_json(const BmaReport& report, const AnalysisConfig& config) {
  nlohmann::json j;
  {
    nlohmann::json models = nlohmann::json::array();
    for (ModelId m : config.models) models.push_back(model_code(m));
    j["config"] = {{"bmr", config.bmr},
                   {"credible_level", config.credible_level},
                   {"iterations", config.iterations},
                   {"seed", config.seed},
                   {"models", models}};
  }
  j["screen"] = {{"passed", report.screen.passed},
                 {"s_max", report.screen.s_max},
                 {"argmax_index", report.screen.argmax_index}};
  j["models"] = nlohmann::json::array();
  j["failures"] = nlohmann::json::array();
  if (report.data_failure) {
    j["failures"].push_back({{"reason", "data failure"}, {"s_max", report.screen.s_max}});
    j["bma"] = nullptr;
    return j.dump(2) + "\n";
  }

  const double scale = report.dose_scale;
  size_t wi = 0;
  for (const auto& o : report.outcomes) {
    if (o.converged && o.posterior) {
      const ModelPosterior& mp = *o.posterior;
      j["models"].push_back({{"id", model_code(o.model)},
                             {"bmd", mp.bmd_mean * scale},
                             {"bmdl", mp.bmdl * scale},
                             {"weight", report.weights[wi++]},
                             {"log_marginal", mp.log_marginal},
                             {"burn_in", mp.diagnostic.burn_in_index},
                             {"restarts", o.restarts_used},
                             {"acceptance_rate", mp.acceptance_rate}});
    } else {
      j["failures"].push_back(
          {{"id", model_code(o.model)}, {"reason", "algorithm failure"}});
    }
  }
  if (report.any_converged())
    j["bma"] = {{"bmd", report.bma_bmd * scale}, {"bmdl", report.bma_bmdl * scale}};
  else
    j["bma"] = nullptr;
  return j.dump(2) + "\n";
}

std::string report_to_table(const BmaReport& report) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << std::left << std::setw(8) << "Model" << std::right << std::setw(12) << "BMD"
     << std::setw(12) << "BMDL" << std::setw(12) << "Weight" << "\n";
  if (report.data_failure) {
    os << "data failure (s_max = " << report.screen.s_max << ")\n";
    return os.str();
  }
  const double scale = report.dose_scale;
  size_t wi = 0;
  for (const auto& o : report.outcomes) {
    os << std::left << std::setw(8) << model_code(o.model) << std::right;
    if (o.converged && o.posterior) {
      os << std::setw(12) << o.posterior->bmd_mean * scale << std::setw(12)
         << o.posterior->bmdl * scale << std::setw(12) << report.weights[wi++] << "\n";
    } else {
      os << std::setw(36) << "algorithm failure" << "\n";
    }
  }
  if (report.any_converged()) {
    os << std::left << std::setw(8) << "BMA" << std::right << std::setw(12)
       << report.bma_bmd * scale << std::setw(12) << report.bma_bmdl * scale << "\n";
  }
  return os.str();
}

}  // namespace bmd

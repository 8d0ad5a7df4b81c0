#include "bmd/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <nlohmann/json.hpp>

#include "bmd/rng.hpp"

namespace bmd {

ThetaVector generating_theta(ModelId model, SimPattern pattern) {
  // xi values per model for the two response patterns; gamma0/gamma1 are
  // shared within a pattern.
  static const double xi_p1[8] = {0.3974, 0.3567, 0.1642, 0.4052, 0.1783, 0.2083, 0.2267, 0.1852};
  static const double xi_p2[8] = {0.1700, 0.1575, 0.0480, 0.2190, 0.1925, 0.2760, 0.2794, 0.2025};
  const int idx = model_index(model) - 1;
  ThetaVector t;
  if (pattern == SimPattern::PI) {
    t.xi = xi_p1[idx];
    t.gamma0 = 0.05;
    t.gamma1 = 0.50;
  } else {
    t.xi = xi_p2[idx];
    t.gamma0 = 0.10;
    t.gamma1 = 0.90;
  }
  return t;
}

QuantalDataset generate_dataset(const SimConfig& config, int replicate) {
  const ThetaVector truth = generating_theta(config.generating_model, config.pattern);
  const double d_m = config.doses.back();

  Rng rng(derive_seed(config.seed, 0x5151000000ULL + static_cast<std::uint64_t>(replicate)));
  std::vector<double> doses = config.doses;
  std::vector<int> y(doses.size()), n(doses.size(), config.per_dose_n);
  for (size_t i = 0; i < doses.size(); ++i) {
    const double r = risk_reparam(config.generating_model, truth, doses[i], config.bmr, d_m);
    int count = 0;
    for (int s = 0; s < config.per_dose_n; ++s)
      if (rng.uniform() < r) ++count;
    y[i] = count;
  }
  return make_dataset(std::move(doses), std::move(y), std::move(n));
}

SimResult run_simulation(const SimConfig& config) {
  if (config.replicates < 1) throw std::invalid_argument("run_simulation: replicates < 1");
  SimResult result;
  result.true_theta = generating_theta(config.generating_model, config.pattern);
  result.replicates.resize(config.replicates);

  AnalysisConfig ac;
  ac.bmr = config.bmr;
  ac.iterations = config.iterations;
  ac.parallel = false;  // replicates are the parallel axis

  std::vector<std::exception_ptr> errors(config.replicates);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel)
#endif
  for (int r = 0; r < config.replicates; ++r) {
    try {
      SimReplicate rep;
      rep.index = r;
      const QuantalDataset data = generate_dataset(config, r);
      AnalysisConfig cfg = ac;
      cfg.seed = derive_seed(config.seed, 0xA7A7000000ULL + static_cast<std::uint64_t>(r));
      const BmaReport report = run_analysis(data, cfg);
      if (report.data_failure) {
        rep.data_failure = true;
      } else {
        for (const auto& o : report.outcomes)
          if (o.converged && o.posterior)
            rep.model_bmdl[model_code(o.model)] = o.posterior->bmdl;
        if (report.any_converged()) rep.bma_bmdl = report.bma_bmdl;
      }
      result.replicates[r] = std::move(rep);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // summaries
  auto summarize = [&](const std::string& name, const std::vector<double>& v) {
    SimEstimatorSummary s;
    s.estimator = name;
    s.count = static_cast<int>(v.size());
    if (v.empty()) return s;
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
      const double pos = p * (sorted.size() - 1);
      const size_t lo = static_cast<size_t>(pos);
      const size_t hi = std::min(lo + 1, sorted.size() - 1);
      return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    };
    int below = 0;
    for (double x : v)
      if (x < result.true_theta.xi) ++below;
    s.coverage = static_cast<double>(below) / v.size();
    s.min = sorted.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.50);
    s.q3 = quantile(0.75);
    s.p95 = quantile(0.95);
    return s;
  };

  for (ModelId m : kAllModels) {
    std::vector<double> v;
    for (const auto& rep : result.replicates) {
      auto it = rep.model_bmdl.find(model_code(m));
      if (it != rep.model_bmdl.end()) v.push_back(it->second);
    }
    result.summaries.push_back(summarize(model_code(m), v));
  }
  {
    std::vector<double> v;
    for (const auto& rep : result.replicates)
      if (rep.bma_bmdl) v.push_back(*rep.bma_bmdl);
    result.summaries.push_back(summarize("BMA", v));
  }

  for (const auto& rep : result.replicates) {
    if (rep.data_failure) {
      ++result.data_failures;
    } else {
      result.algorithm_failures += 8 - static_cast<int>(rep.model_bmdl.size());
    }
  }
  return result;
}

std::string simulation_to_json(const SimResult& result, const SimConfig& config) {
  nlohmann::json j;
  j["config"] = {{"generating_model", model_code(config.generating_model)},
                 {"pattern", config.pattern == SimPattern::PI ? "P-I" : "P-II"},
                 {"per_dose_n", config.per_dose_n},
                 {"replicates", config.replicates},
                 {"bmr", config.bmr},
                 {"iterations", config.iterations},
                 {"seed", config.seed}};
  j["true_xi"] = result.true_theta.xi;
  j["data_failures"] = result.data_failures;
  j["algorithm_failures"] = result.algorithm_failures;
  j["replicates"] = nlohmann::json::array();
  for (const auto& rep : result.replicates) {
    nlohmann::json r = {{"index", rep.index}, {"data_failure", rep.data_failure}};
    r["model_bmdl"] = rep.model_bmdl;
    if (rep.bma_bmdl)
      r["bma_bmdl"] = *rep.bma_bmdl;
    else
      r["bma_bmdl"] = nullptr;
    j["replicates"].push_back(std::move(r));
  }
  j["summaries"] = nlohmann::json::array();
  for (const auto& s : result.summaries) {
    j["summaries"].push_back({{"estimator", s.estimator},
                              {"count", s.count},
                              {"coverage", s.coverage},
                              {"min", s.min},
                              {"q1", s.q1},
                              {"median", s.median},
                              {"q3", s.q3},
                              {"p95", s.p95}});
  }
  return j.dump(2) + "\n";
}

std::string simulation_to_table(const SimResult& result) {
  std::string out = "estimator  count  coverage      min       q1   median       q3      p95\n";
  char buf[160];
  for (const auto& s : result.summaries) {
    std::snprintf(buf, sizeof(buf), "%-9s %6d  %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n",
                  s.estimator.c_str(), s.count, s.coverage, s.min, s.q1, s.median, s.q3, s.p95);
    out += buf;
  }
  return out;
}

}  // namespace bmd

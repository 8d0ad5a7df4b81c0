// Command-line pipeline for model-averaged benchmark dose analysis:
//   analyze   fit all models to a quantal dataset and emit the BMA report
//   elicit    solve prior hyperparameters from elicited quartiles
//   simulate  repeated-sampling study of BMDL operating characteristics

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "bmd/pipeline.hpp"
#include "bmd/simulate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataFailure = 2;
constexpr int kExitAllFailed = 3;
constexpr int kExitIo = 4;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write output file: " + out_path);
  out << text;
}

std::pair<double, double> prior_entry(const nlohmann::json& e, bool is_beta, const char* name) {
  if (e.contains("q1") && e.contains("q2")) {
    bmd::ElicitedQuartiles q{e["q1"].get<double>(), e["q2"].get<double>()};
    const bmd::ElicitResult r = is_beta ? bmd::elicit_beta(q) : bmd::elicit_inverse_gamma(q);
    std::cerr << "elicited " << name << ": (" << r.a << ", " << r.b << ")\n";
    return {r.a, r.b};
  }
  if (is_beta && e.contains("a") && e.contains("b"))
    return {e["a"].get<double>(), e["b"].get<double>()};
  if (!is_beta && e.contains("alpha") && e.contains("beta"))
    return {e["alpha"].get<double>(), e["beta"].get<double>()};
  throw std::runtime_error(std::string("priors file: entry '") + name +
                           "' needs hyperparameters or quartiles");
}

void load_priors(const std::string& spec, bmd::AnalysisConfig& cfg) {
  if (spec == "objective") return;  // defaults already objective
  std::ifstream in(spec);
  if (!in) throw std::runtime_error("cannot open priors file: " + spec);
  nlohmann::json j;
  in >> j;

  bmd::PriorSpec p2 = bmd::objective_priors(2);
  bmd::PriorSpec p3 = bmd::objective_priors(3);
  if (j.contains("xi")) {
    auto [a, b] = prior_entry(j["xi"], false, "xi");
    p2.xi_alpha = p3.xi_alpha = a;
    p2.xi_beta = p3.xi_beta = b;
  }
  if (j.contains("gamma0")) {
    auto [a, b] = prior_entry(j["gamma0"], true, "gamma0");
    p2.g0_a = p3.g0_a = a;
    p2.g0_b = p3.g0_b = b;
  }
  if (j.contains("gamma1") && !(j["gamma1"].is_string() && j["gamma1"] == "objective")) {
    auto [a, b] = prior_entry(j["gamma1"], true, "gamma1");
    p3.g1_ab = std::make_pair(a, b);
  }
  cfg.priors2 = p2;
  cfg.priors3 = p3;
}

std::vector<bmd::ModelId> parse_models(const std::string& csv) {
  std::vector<bmd::ModelId> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto m = bmd::model_from_code(tok);
    if (!m) throw std::runtime_error("unknown model code: " + tok);
    out.push_back(*m);
  }
  if (out.empty()) throw std::runtime_error("--models: empty model list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-averaged benchmark dose analysis for quantal dose-response data"};
  app.require_subcommand(1);

  // analyze
  std::string dataset_path, priors_spec = "objective", models_csv, out_path;
  double bmr = 0.10, credible = 0.95;
  int iterations = 100000;
  std::uint64_t seed = 0;
  bool serial = false;
  auto* analyze = app.add_subcommand("analyze", "Run the full BMA pipeline on a dataset");
  analyze->add_option("dataset", dataset_path, "CSV file with header dose,responders,n")
      ->required();
  analyze->add_option("--priors", priors_spec, "'objective' or a JSON priors file");
  analyze->add_option("--models", models_csv, "comma-separated model codes (default all)");
  analyze->add_option("--bmr", bmr, "benchmark response level");
  analyze->add_option("--credible-level", credible, "credible level for the BMDL");
  analyze->add_option("--iterations", iterations, "chain length K");
  analyze->add_option("--seed", seed, "random seed");
  analyze->add_option("--out", out_path, "write JSON report here (default stdout)");
  analyze->add_flag("--serial", serial, "disable the per-model thread fan-out");

  // elicit
  std::string dist;
  double q1 = 0.0, q2 = 0.0;
  std::string elicit_out;
  auto* elicit = app.add_subcommand("elicit", "Solve prior hyperparameters from quartiles");
  elicit->add_option("distribution", dist, "ig or beta")->required()
      ->check(CLI::IsMember({"ig", "beta"}));
  elicit->add_option("q1", q1, "first quartile")->required();
  elicit->add_option("q2", q2, "median")->required();
  elicit->add_option("--out", elicit_out, "write JSON here (default stdout)");

  // simulate
  std::string gen_model = "M6", pattern = "P-I", sim_out;
  int per_dose_n = 50, replicates = 200, sim_iters = 20000;
  std::uint64_t sim_seed = 0;
  double sim_bmr = 0.10;
  bool sim_serial = false, full_scale = false;
  auto* simulate = app.add_subcommand("simulate", "BMDL operating-characteristics study");
  simulate->add_option("--model", gen_model, "generating model code");
  simulate->add_option("--config", pattern, "P-I or P-II")
      ->check(CLI::IsMember({"P-I", "P-II"}));
  simulate->add_option("--n", per_dose_n, "per-dose sample size");
  simulate->add_option("--replicates", replicates, "number of simulated datasets");
  simulate->add_option("--bmr", sim_bmr, "benchmark response level");
  simulate->add_option("--iterations", sim_iters, "chain length K per model");
  simulate->add_option("--seed", sim_seed, "random seed");
  simulate->add_option("--out", sim_out, "write JSON here (default stdout)");
  simulate->add_flag("--serial", sim_serial, "disable the replicate thread fan-out");
  simulate->add_flag("--full-scale", full_scale, "full-scale run: 2000 replicates, K=100000");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      bmd::QuantalDataset data;
      try {
        data = bmd::load_dataset(dataset_path);
      } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
      }
      bmd::AnalysisConfig cfg;
      cfg.bmr = bmr;
      cfg.credible_level = credible;
      cfg.iterations = iterations;
      cfg.seed = seed;
      cfg.parallel = !serial;
      if (!models_csv.empty()) cfg.models = parse_models(models_csv);
      load_priors(priors_spec, cfg);

      const bmd::BmaReport report = bmd::run_analysis(data, cfg);
      write_output(bmd::report_to_json(report, cfg), out_path);
      std::cerr << bmd::report_to_table(report);
      if (report.data_failure) {
        std::cerr << "data failure: no increasing trend (s_max = " << report.screen.s_max
                  << ")\n";
        return kExitDataFailure;
      }
      if (!report.any_converged()) {
        std::cerr << "algorithm failure on every model\n";
        return kExitAllFailed;
      }
      return kExitOk;
    }

    if (*elicit) {
      bmd::ElicitedQuartiles q{q1, q2};
      nlohmann::json j;
      try {
        const bmd::ElicitResult r =
            dist == "ig" ? bmd::elicit_inverse_gamma(q) : bmd::elicit_beta(q);
        j = {{"distribution", dist},
             {"q1", q1},
             {"q2", q2},
             {dist == "ig" ? "alpha" : "a", r.a},
             {dist == "ig" ? "beta" : "b", r.b},
             {"residual", r.residual}};
      } catch (const bmd::ElicitationFailure& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual << ")\n";
        return kExitUsage;
      }
      write_output(j.dump(2) + "\n", elicit_out);
      return kExitOk;
    }

    if (*simulate) {
      bmd::SimConfig cfg;
      auto m = bmd::model_from_code(gen_model);
      if (!m) throw std::runtime_error("unknown model code: " + gen_model);
      cfg.generating_model = *m;
      cfg.pattern = pattern == "P-I" ? bmd::SimPattern::PI : bmd::SimPattern::PII;
      cfg.per_dose_n = per_dose_n;
      cfg.replicates = full_scale ? 2000 : replicates;
      cfg.iterations = full_scale ? 100000 : sim_iters;
      cfg.bmr = sim_bmr;
      cfg.seed = sim_seed;
      cfg.parallel = !sim_serial;

      const bmd::SimResult result = bmd::run_simulation(cfg);
      write_output(bmd::simulation_to_json(result, cfg), sim_out);
      std::cerr << bmd::simulation_to_table(result);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

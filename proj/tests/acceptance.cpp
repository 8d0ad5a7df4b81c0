// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria. Tolerances are pinned
// here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "bmd/pipeline.hpp"
#include "bmd/rng.hpp"
#include "bmd/simulate.hpp"
#include "bmd/special.hpp"

using namespace bmd;

namespace {

int failures = 0;

void verdict(int n, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ---- 1: prior elicitation ----------------------------------------------
void criterion1() {
  const double t0 = now_s();
  bool ok = true;
  std::string detail;
  try {
    const auto ig = elicit_inverse_gamma({0.18, 0.5});
    const auto be = elicit_beta({0.04, 0.08});
    ok = std::fabs(ig.a - 0.53) < 0.01 && std::fabs(ig.b - 0.13) < 0.01 &&
         std::fabs(be.a - 1.36) < 0.01 && std::fabs(be.b - 12.31) < 0.01;
    const double dt = now_s() - t0;
    ok = ok && dt < 1.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "elicitation IG(%.4f, %.4f) Beta(%.4f, %.4f) in %.2fs (want "
                  "IG(0.53, 0.13), Beta(1.36, 12.31) +/-0.01, <1s)",
                  ig.a, ig.b, be.a, be.b, dt);
    detail = buf;
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("elicitation threw: ") + e.what();
  }
  verdict(1, ok, detail);
}

// ---- 2: cumene benchmark reproduction ----------------------------------
// Reference values for the elicited-prior analysis at K = 100000.
struct Ref {
  double bmd, bmdl;
};
const std::map<std::string, Ref> kCumeneRef = {
    {"M1", {43.2752, 35.5991}}, {"M2", {44.7192, 37.6845}}, {"M3", {18.0881, 14.7567}},
    {"M4", {76.3691, 66.2304}}, {"M5", {21.2154, 16.2568}}, {"M6", {31.1642, 15.9229}},
    {"M7", {30.1092, 15.3244}}, {"M8", {24.2385, 17.0606}}};

void criterion2(const QuantalDataset& data) {
  bool ok = true;
  std::string why;
  const double t0 = now_s();
  for (std::uint64_t seed = 1; seed <= 5 && ok; ++seed) {
    AnalysisConfig cfg;
    cfg.iterations = 100000;
    cfg.seed = seed;
    cfg.priors2.xi_alpha = cfg.priors3.xi_alpha = 0.53;
    cfg.priors2.xi_beta = cfg.priors3.xi_beta = 0.13;
    cfg.priors2.g0_a = cfg.priors3.g0_a = 1.36;
    cfg.priors2.g0_b = cfg.priors3.g0_b = 12.31;
    cfg.priors3.g1_ab = {0.5, 0.5};

    const BmaReport rep = run_analysis(data, cfg);
    if (rep.data_failure || !rep.any_converged()) {
      ok = false;
      why = "pipeline failed on cumene";
      break;
    }
    const double bmd = rep.bma_bmd * rep.dose_scale;
    const double bmdl = rep.bma_bmdl * rep.dose_scale;
    if (std::fabs(bmd - 27.4) > 2.5 || std::fabs(bmdl - 15.2) > 2.0) {
      ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "seed %llu BMA (%.3f, %.3f) outside 27.4+/-2.5, 15.2+/-2.0",
                    (unsigned long long)seed, bmd, bmdl);
      why = buf;
      break;
    }
    // per-model values within 10% and the weight structure
    std::vector<std::pair<double, std::string>> weighted;
    const auto included = rep.included();
    for (size_t i = 0; i < included.size(); ++i) {
      const auto& mp = *included[i];
      const auto& ref = kCumeneRef.at(model_code(mp.model));
      const double mbmd = mp.bmd_mean * rep.dose_scale;
      const double mbmdl = mp.bmdl * rep.dose_scale;
      if (std::fabs(mbmd / ref.bmd - 1.0) > 0.10 || std::fabs(mbmdl / ref.bmdl - 1.0) > 0.10) {
        ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "seed %llu %s (%.3f, %.3f) vs ref (%.3f, %.3f) > 10%%",
                      (unsigned long long)seed, model_code(mp.model).c_str(), mbmd, mbmdl,
                      ref.bmd, ref.bmdl);
        why = buf;
      }
      weighted.push_back({rep.weights[i], model_code(mp.model)});
      if (model_code(mp.model) == "M4" && rep.weights[i] >= 0.005) {
        ok = false;
        why = "M4 weight >= 0.005";
      }
    }
    std::sort(weighted.rbegin(), weighted.rend());
    std::vector<std::string> top3;
    for (int i = 0; i < 3 && i < (int)weighted.size(); ++i) top3.push_back(weighted[i].second);
    std::sort(top3.begin(), top3.end());
    if (top3 != std::vector<std::string>{"M3", "M6", "M7"}) {
      ok = false;
      why = "top-3 weight set is not {M6, M7, M3}";
    }
  }
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "cumene BMA/per-model estimates over 5 seeds, %.0fs%s%s", now_s() - t0,
                ok ? "" : " -- ", ok ? "" : why.c_str());
  verdict(2, ok, buf);
}

// ---- 3: reparameterization suite ---------------------------------------
void criterion3() {
  Rng rng(0xC3);
  const double bmr = 0.10;
  bool ok = true;
  std::string why;
  for (ModelId m : kAllModels) {
    for (int rep = 0; rep < 500 && ok; ++rep) {
      ThetaVector t;
      do {
        t.gamma0 = 0.01 + 0.89 * rng.uniform();
        if (n_params(m) == 3) {
          t.gamma1 = t.gamma0 + (0.99 - t.gamma0) * (0.02 + 0.98 * rng.uniform());
          t.xi = 0.01 + 0.93 * rng.uniform();
        } else {
          t.xi = 0.01 + 3.0 * rng.uniform();
          t.gamma1 = 0.0;
        }
      } while (!theta_in_support(m, t, bmr));

      if (std::fabs(extra_risk(m, t, t.xi, bmr) - bmr) > 1e-10 ||
          std::fabs(risk_reparam(m, t, 0.0, bmr) - t.gamma0) > 1e-12 ||
          (n_params(m) == 3 && std::fabs(risk_reparam(m, t, 1.0, bmr) - t.gamma1) > 1e-10)) {
        ok = false;
        why = "anchor-point identity failed for " + model_code(m);
        break;
      }
      const BetaVector b = reparam_to_beta(m, t, bmr);
      for (double d : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0, 1.3}) {
        if (std::fabs(risk_reparam(m, t, d, bmr) - risk_traditional(m, b, d)) > 1e-9) {
          ok = false;
          why = "grid equivalence failed for " + model_code(m);
          break;
        }
      }
    }
  }
  verdict(3, ok,
          ok ? "reparameterization identities over 8 models x 500 random valid thetas"
             : why);
}

// ---- 4: marginal-likelihood oracles ------------------------------------
void criterion4(const QuantalDataset& data) {
  bool ok = true;
  std::string why;

  // Beta-Binomial analytic case
  {
    const int y = 7, n = 20;
    const double a = 2.0, b = 3.0;
    auto lbeta = [](double p, double q) {
      return log_gamma(p) + log_gamma(q) - log_gamma(p + q);
    };
    const double exact = log_choose(n, y) + lbeta(y + a, n - y + b) - lbeta(a, b);
    const LogDensity target = [=](const double* x) {
      const double p = x[0];
      if (p <= 0.0 || p >= 1.0) return kLogZero;
      return log_choose(n, y) + y * std::log(p) + (n - y) * std::log1p(-p) +
             beta_log_pdf(p, a, b);
    };
    Rng rng(4004);
    std::vector<double> draws(20000);
    for (double& d : draws) d = beta_quantile(rng.uniform(), y + a, n - y + b);
    const double est = bridge_log_marginal(target, draws, 1, 4);
    if (std::fabs(std::exp(est - exact) - 1.0) > 0.02) {
      ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "Beta-Binomial bridge off: est %.6f exact %.6f", est,
                    exact);
      why = buf;
    }
  }

  // M3 two-parameter case against a trapezoid quadrature oracle
  if (ok) {
    PriorSpec priors;
    priors.xi_alpha = 2.0;
    priors.xi_beta = 0.5;
    priors.g0_a = 2.0;
    priors.g0_b = 5.0;

    const LogDensity target = make_posterior_density(data, ModelId::M3_QuantalLinear, priors, 0.10);

    // independent quadrature of m = integral prior x likelihood over a box
    // that carries all non-negligible mass (xi in (0, 4], g0 in (0, 1))
    const int nx = 400, ng = 400;
    const double xi_hi = 4.0;
    double best = -1e308;
    std::vector<double> logv;
    logv.reserve((size_t)nx * ng);
    for (int i = 1; i <= nx; ++i) {
      const double xi = xi_hi * i / nx;
      for (int j = 1; j < ng; ++j) {
        const double g0 = (double)j / ng;
        const double x[2] = {xi, g0};
        const double lp = target(x);
        if (lp > kLogZero) {
          logv.push_back(lp);
          best = std::max(best, lp);
        } else {
          logv.push_back(kLogZero);
        }
      }
    }
    double s = 0.0;
    for (double lp : logv)
      if (lp > kLogZero) s += std::exp(lp - best);
    const double cell = (xi_hi / nx) * (1.0 / ng);
    const double quad = best + std::log(s * cell);

    AmConfig am;
    am.iterations = 100000;
    am.seed = 40;
    const Chain chain = run_chain(data, ModelId::M3_QuantalLinear, priors, 0.10, am);
    const DiagnosticReport diag = select_burn_in(chain);
    if (!diag.passed()) {
      ok = false;
      why = "M3 oracle chain failed diagnostics";
    } else {
      const int K0 = diag.burn_in_index;
      std::vector<double> retained;
      for (int k = K0 - 1; k < am.iterations; ++k) {
        const double* d = chain.raw.draw(k);
        retained.push_back(d[0]);
        retained.push_back(d[1]);
      }
      const double est = bridge_log_marginal(target, retained, 2, 41);
      if (std::fabs(std::exp(est - quad) - 1.0) > 0.05) {
        ok = false;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "M3 bridge %.6f vs quadrature %.6f beyond 5%%", est,
                      quad);
        why = buf;
      }
    }
  }
  verdict(4, ok, ok ? "bridge marginals match Beta-Binomial (2%) and M3 quadrature (5%)" : why);
}

// ---- 5: frozen-adaptation conjugate check ------------------------------
void criterion5() {
  const double a = 9, b = 16;  // posterior of y=7, n=20 under Beta(2,3)
  const LogDensity target = [](const double* x) {
    const double p = x[0];
    if (p <= 0.0 || p >= 1.0) return kLogZero;
    return 8.0 * std::log(p) + 15.0 * std::log1p(-p);
  };
  AmConfig cfg;
  cfg.iterations = 100000;
  cfg.seed = 505;
  cfg.adapt = false;
  const AmChain chain = am_sample(target, {0.35}, cfg);
  std::vector<double> xs = chain.component(0);
  xs.erase(xs.begin(), xs.begin() + 10000);
  std::sort(xs.begin(), xs.end());

  bool ok = true;
  std::string why = "conjugate Beta quantiles within 3 MC standard errors at K = 100000";
  const double n_eff = xs.size() / 50.0;  // conservative ESS for the frozen chain
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double exact = beta_quantile(p, a, b);
    const double dens = std::exp(beta_log_pdf(exact, a, b));
    const double se = std::sqrt(p * (1 - p) / n_eff) / dens;
    const double got = xs[(size_t)(p * (xs.size() - 1))];
    if (std::fabs(got - exact) > 3 * se) {
      ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "quantile %.2f: %.5f vs %.5f (3se = %.5f)", p, got, exact,
                    3 * se);
      why = buf;
    }
  }
  verdict(5, ok, why);
}

// ---- 6: diagnostics fixtures -------------------------------------------
void criterion6() {
  auto synthetic = [](std::vector<double> xs) {
    Chain c;
    c.raw.dim = 1;
    c.raw.iterations = (int)xs.size();
    c.raw.draws = std::move(xs);
    return c;
  };
  auto noise = [](std::uint64_t seed, int n) {
    Rng rng(seed);
    std::vector<double> x(n);
    for (double& v : x) v = rng.normal();
    return x;
  };

  bool ok = true;
  std::string why;

  int pass10 = 0;
  const int K = 50000;
  for (std::uint64_t s = 1; s <= 100; ++s)
    if (select_burn_in(synthetic(noise(40000 + s, K)), true).stage == BurnInStage::p10)
      ++pass10;
  if (pass10 < 95) {
    ok = false;
    why = "i.i.d. chains passed the 10% stage in only " + std::to_string(pass10) + "/100 trials";
  }

  for (std::uint64_t s = 1; s <= 5 && ok; ++s) {
    auto x = noise(s, K);
    const int d = K / 4;
    for (int t = 0; t < d; ++t) x[t] += 0.5 - 1.0 * t / (d - 1.0);
    const auto r = select_burn_in(synthetic(std::move(x)), true);
    if (r.stage != BurnInStage::p30 || r.burn_in_index != 3 * K / 10 + 1) {
      ok = false;
      why = "drift-then-stationary chain did not pass exactly at the 30% stage";
    }
  }

  if (ok) {
    auto x = noise(123, 100000);
    for (int t = 0; t < 10000; ++t) x[t] += 8.0;
    const auto r = select_burn_in(synthetic(std::move(x)), true);
    if (r.stage != BurnInStage::p20 || r.burn_in_index != 20001) {
      ok = false;
      why = "K0 != 20001 for a 20%-stage pass at K = 100000";
    }
  }

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "i.i.d. 10%%-stage passes %d/100; drift passes at 30%%; K0 = 20001 at 20%%%s%s",
                pass10, ok ? "" : " -- ", ok ? "" : why.c_str());
  verdict(6, ok, buf);
}

// ---- 7: simulation operating characteristics ---------------------------
void criterion7() {
  bool ok = true;
  std::string why;
  const double t0 = now_s();

  double coverage = 0.0;
  {
    SimConfig cfg;  // M6 / P-I / N = 50, 200 replicates, K = 20000
    cfg.seed = 7;
    const SimResult r = run_simulation(cfg);
    for (const auto& s : r.summaries)
      if (s.estimator == "BMA") coverage = s.coverage;
    if (!(coverage >= 0.90 && coverage <= 1.00)) {
      ok = false;
      char buf[120];
      std::snprintf(buf, sizeof(buf), "BMA BMDL coverage %.3f outside [0.90, 1.00]", coverage);
      why = buf;
    }
  }

  double ratio = 0.0;
  if (ok) {
    SimConfig cfg;
    cfg.generating_model = ModelId::M3_QuantalLinear;
    cfg.pattern = SimPattern::PII;
    cfg.per_dose_n = 1000;
    cfg.replicates = 100;
    cfg.seed = 8;
    const SimResult r = run_simulation(cfg);
    double p95_bma = 0.0, p95_m3 = 0.0;
    for (const auto& s : r.summaries) {
      if (s.estimator == "BMA") p95_bma = s.p95;
      if (s.estimator == "M3") p95_m3 = s.p95;
    }
    ratio = p95_bma / p95_m3;
    if (!(std::fabs(ratio - 1.0) <= 0.10)) {
      ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf), "BMA p95 %.4f vs M3 p95 %.4f (ratio %.3f) beyond 10%%",
                    p95_bma, p95_m3, ratio);
      why = buf;
    }
  }

  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "M6/P-I coverage %.3f in [0.90, 1.00]; M3/P-II p95 ratio %.3f within 10%%; "
                "%.0fs%s%s",
                coverage, ratio, now_s() - t0, ok ? "" : " -- ", ok ? "" : why.c_str());
  verdict(7, ok, buf);
}

// ---- 8: data-failure screen and CLI exit code --------------------------
void criterion8(const QuantalDataset& data, const std::string& cli_path) {
  bool ok = true;
  std::string why;

  const auto s = screen(data);
  if (!(s.passed && std::fabs(s.s_max - 2.3478) < 5e-4 && s.argmax_index == 2)) {
    ok = false;
    why = "cumene screen values off";
  }

  const auto flat = make_dataset({0, 1, 2}, {5, 5, 5}, {50, 50, 50});
  const auto dec = make_dataset({0, 1, 2}, {20, 10, 5}, {50, 50, 50});
  if (screen(flat).passed || screen(dec).passed) {
    ok = false;
    why = "flat/decreasing fixture passed the screen";
  }

  // documented exit code 2 through the CLI
  if (ok) {
    const char* path = "/tmp/bmd_accept_flat.csv";
    {
      std::ofstream f(path);
      f << "dose,responders,n\n0,5,50\n1,5,50\n2,5,50\n";
    }
    const std::string cmd =
        cli_path + " analyze " + path + " --iterations 2000 >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::remove(path);
    if (code != 2) {
      ok = false;
      why = "flat data exit code " + std::to_string(code) + " != 2";
    }
  }
  verdict(8, ok,
          ok ? "screen: cumene s_max = 2.3478 at index 2; flat/decreasing fail with exit code 2"
             : why);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <cumene.csv> [bmd-cli-path]\n");
    return 64;
  }
  QuantalDataset cumene;
  try {
    cumene = load_dataset(argv[1]);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cannot load %s: %s\n", argv[1], e.what());
    return 64;
  }
  std::string cli = argc > 2 ? argv[2] : "";
  if (cli.empty()) {
    // assume the CLI sits next to this binary
    std::string self = argv[0];
    const auto slash = self.find_last_of('/');
    cli = (slash == std::string::npos ? std::string(".") : self.substr(0, slash)) + "/bmd";
  }

  criterion1();
  criterion2(cumene);
  criterion3();
  criterion4(cumene);
  criterion5();
  criterion6();
  criterion7();
  criterion8(cumene, cli);

  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures;
}

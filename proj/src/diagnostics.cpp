#include "bmd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace bmd {

namespace {

double mean_of(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / x.size();
}

double variance_of(const std::vector<double>& x, double mean) {
  double s = 0.0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / x.size();
}

void check_series(const std::vector<double>& x) {
  if (x.size() < 50) throw std::domain_error("spectral density: series shorter than 50");
  const double v = variance_of(x, mean_of(x));
  if (!(v > 0.0)) throw std::domain_error("spectral density: degenerate (zero-variance) series");
}

// Aggregate into means of consecutive blocks so the batched length stays
// near `target_len`. The spectral density rescales by the batch size.
std::vector<double> batch_series(const std::vector<double>& x, size_t target_len, int& batch) {
  const size_t L = x.size();
  batch = static_cast<int>((L + target_len - 1) / target_len);
  if (batch <= 1) {
    batch = 1;
    return x;
  }
  const size_t Lb = L / batch;
  std::vector<double> out(Lb);
  for (size_t j = 0; j < Lb; ++j) {
    double s = 0.0;
    for (int t = 0; t < batch; ++t) s += x[j * batch + t];
    out[j] = s / batch;
  }
  return out;
}

}  // namespace

double spectral_density_zero_ar(const std::vector<double>& series) {
  check_series(series);
  const int L = static_cast<int>(series.size());
  const double mu = mean_of(series);

  const int pmax = std::min(30, L / 10);
  std::vector<double> acov(pmax + 1, 0.0);
  for (int lag = 0; lag <= pmax; ++lag) {
    double s = 0.0;
    for (int t = lag; t < L; ++t) s += (series[t] - mu) * (series[t - lag] - mu);
    acov[lag] = s / L;
  }

  // Levinson-Durbin; track AIC over orders 0..pmax.
  std::vector<double> phi(pmax + 1, 0.0), prev(pmax + 1, 0.0);
  double err = acov[0];
  double best_aic = L * std::log(err);
  int best_order = 0;
  double best_phi_sum = 0.0;

  for (int p = 1; p <= pmax; ++p) {
    double acc = acov[p];
    for (int j = 1; j < p; ++j) acc -= prev[j] * acov[p - j];
    const double k = acc / err;
    phi[p] = k;
    for (int j = 1; j < p; ++j) phi[j] = prev[j] - k * prev[p - j];
    err *= (1.0 - k * k);
    if (!(err > 0.0)) break;
    const double aic = L * std::log(err) + 2.0 * p;
    if (aic < best_aic) {
      best_aic = aic;
      best_order = p;
      best_phi_sum = 0.0;
      for (int j = 1; j <= p; ++j) best_phi_sum += phi[j];
    }
    std::copy(phi.begin(), phi.begin() + p + 1, prev.begin());
  }

  // Recompute the innovation variance at the chosen order.
  double sigma2 = acov[0];
  if (best_order > 0) {
    std::fill(phi.begin(), phi.end(), 0.0);
    std::fill(prev.begin(), prev.end(), 0.0);
    sigma2 = acov[0];
    for (int p = 1; p <= best_order; ++p) {
      double acc = acov[p];
      for (int j = 1; j < p; ++j) acc -= prev[j] * acov[p - j];
      const double k = acc / sigma2;
      phi[p] = k;
      for (int j = 1; j < p; ++j) phi[j] = prev[j] - k * prev[p - j];
      sigma2 *= (1.0 - k * k);
      std::copy(phi.begin(), phi.begin() + p + 1, prev.begin());
    }
  }
  const double denom = 1.0 - best_phi_sum;
  if (!(denom * denom > 0.0) || !std::isfinite(sigma2) || !(sigma2 > 0.0))
    throw std::domain_error("spectral density: AR fit degenerate");
  return sigma2 / (denom * denom);
}

double spectral_density_zero_glm(const std::vector<double>& series) {
  check_series(series);
  const size_t L = series.size();

  int batch = 1;
  const std::vector<double> xb = batch_series(series, 1000, batch);
  const size_t Lb = xb.size();
  const double mu = mean_of(xb);

  size_t nfreq = static_cast<size_t>(std::ceil(std::sqrt(static_cast<double>(L))));
  nfreq = std::min(nfreq, Lb / 2);
  if (nfreq < 4) throw std::domain_error("spectral density: too few periodogram ordinates");

  std::vector<double> freq(nfreq), perio(nfreq);
  for (size_t j = 1; j <= nfreq; ++j) {
    std::complex<double> acc(0.0, 0.0);
    const double w = -2.0 * M_PI * static_cast<double>(j) / static_cast<double>(Lb);
    for (size_t t = 0; t < Lb; ++t)
      acc += (xb[t] - mu) * std::polar(1.0, w * static_cast<double>(t));
    freq[j - 1] = static_cast<double>(j) / static_cast<double>(Lb);
    perio[j - 1] = std::norm(acc) / static_cast<double>(Lb);
  }

  // Gamma GLM with log link: log E[I_j] = b0 + b1 f_j. With this family
  // the IRLS working weights are identically 1.
  double sum_pos = 0.0;
  size_t n_pos = 0;
  for (double p : perio)
    if (p > 0.0) {
      sum_pos += p;
      ++n_pos;
    }
  if (n_pos < nfreq / 2 || !(sum_pos > 0.0))
    throw std::domain_error("spectral density: periodogram degenerate");

  double b0 = std::log(sum_pos / n_pos), b1 = 0.0;
  for (int it = 0; it < 100; ++it) {
    double sw = 0.0, sx = 0.0, sxx = 0.0, sz = 0.0, sxz = 0.0;
    for (size_t j = 0; j < nfreq; ++j) {
      const double eta = b0 + b1 * freq[j];
      const double m = std::exp(eta);
      if (!std::isfinite(m) || !(m > 0.0))
        throw std::domain_error("spectral density: GLM diverged");
      const double z = eta + (perio[j] - m) / m;
      sw += 1.0;
      sx += freq[j];
      sxx += freq[j] * freq[j];
      sz += z;
      sxz += freq[j] * z;
    }
    const double det = sw * sxx - sx * sx;
    if (!(std::fabs(det) > 1e-300)) throw std::domain_error("spectral density: GLM singular");
    const double nb1 = (sw * sxz - sx * sz) / det;
    const double nb0 = (sz - nb1 * sx) / sw;
    const bool done = std::fabs(nb0 - b0) + std::fabs(nb1 - b1) < 1e-10;
    b0 = nb0;
    b1 = nb1;
    if (done) break;
  }
  const double s0 = std::exp(b0) * batch;
  if (!std::isfinite(s0) || !(s0 > 0.0))
    throw std::domain_error("spectral density: GLM produced nonpositive estimate");
  return s0;
}

double spectral_density_zero(const std::vector<double>& series, bool force_ar) {
  if (!force_ar) {
    try {
      return spectral_density_zero_glm(series);
    } catch (const std::domain_error&) {
      // fall through to the AR estimator
    }
  }
  return spectral_density_zero_ar(series);
}

namespace {

struct BlockStat {
  double stat;
  double var_of_stat;
};

BlockStat mean_stat(const std::vector<double>& x, bool force_ar) {
  const double m = mean_of(x);
  return {m, spectral_density_zero(x, force_ar) / x.size()};
}

BlockStat cov_stat(const std::vector<double>& xi, const std::vector<double>& xj, bool force_ar) {
  const double mi = mean_of(xi), mj = mean_of(xj);
  std::vector<double> tau(xi.size());
  for (size_t k = 0; k < xi.size(); ++k) tau[k] = (xi[k] - mi) * (xj[k] - mj);
  const double c = mean_of(tau);
  return {c, spectral_density_zero(tau, force_ar) / tau.size()};
}

}  // namespace

std::vector<double> geweke_z(const std::vector<std::vector<double>>& early,
                             const std::vector<std::vector<double>>& late, bool force_ar) {
  if (early.empty() || early.size() != late.size())
    throw std::invalid_argument("geweke_z: block component counts differ");
  const size_t dim = early.size();

  std::vector<double> z;
  auto push = [&](const BlockStat& e, const BlockStat& l) {
    z.push_back((e.stat - l.stat) / std::sqrt(e.var_of_stat + l.var_of_stat));
  };
  for (size_t u = 0; u < dim; ++u) push(mean_stat(early[u], force_ar), mean_stat(late[u], force_ar));
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = i + 1; j < dim; ++j)
      push(cov_stat(early[i], early[j], force_ar), cov_stat(late[i], late[j], force_ar));
  return z;
}

DiagnosticReport select_burn_in(const Chain& chain, bool force_ar) {
  const int K = chain.raw.iterations;
  const int dim = chain.raw.dim;

  std::vector<std::vector<double>> full(dim);
  for (int u = 0; u < dim; ++u) full[u] = chain.raw.component(u);

  auto slice = [&](int begin, int len) {
    std::vector<std::vector<double>> out(dim);
    for (int u = 0; u < dim; ++u)
      out[u].assign(full[u].begin() + begin, full[u].begin() + begin + len);
    return out;
  };

  const int late_len = K / 2;
  const std::vector<std::vector<double>> late = slice(K - late_len, late_len);

  DiagnosticReport report;
  const double fractions[3] = {0.10, 0.20, 0.30};
  const BurnInStage stages[3] = {BurnInStage::p10, BurnInStage::p20, BurnInStage::p30};
  for (int s = 0; s < 3; ++s) {
    const int early_len = static_cast<int>(std::lround(fractions[s] * K));
    std::vector<double> z;
    bool ok = true;
    try {
      z = geweke_z(slice(0, early_len), late, force_ar);
      for (double v : z)
        if (!std::isfinite(v) || std::fabs(v) >= 1.96) ok = false;
    } catch (const std::domain_error&) {
      ok = false;  // degenerate series fails the stage
    }
    report.z_statistics.push_back(std::move(z));
    if (ok) {
      report.stage = stages[s];
      report.burn_in_index = early_len + 1;
      return report;
    }
  }
  report.stage = BurnInStage::failed;
  report.burn_in_index = 1;
  return report;
}

}  // namespace bmd

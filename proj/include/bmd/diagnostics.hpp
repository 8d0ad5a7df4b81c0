#ifndef BMD_DIAGNOSTICS_HPP
#define BMD_DIAGNOSTICS_HPP

#include <vector>

#include "bmd/sampler.hpp"

namespace bmd {

enum class BurnInStage { p10, p20, p30, failed };

struct DiagnosticReport {
  int burn_in_index = 1;  // K0, 1-based index of the first retained draw
  BurnInStage stage = BurnInStage::failed;
  // Z statistics per attempted stage (means first, then covariance pairs).
  std::vector<std::vector<double>> z_statistics;
  int restarts_used = 0;

  bool passed() const { return stage != BurnInStage::failed; }
};

/// Spectral density at frequency zero from an AR fit with AIC-selected
/// order (0..min(30, L/10)). Throws std::domain_error on a zero-variance
/// series or length < 50.
double spectral_density_zero_ar(const std::vector<double>& series);

/// Spectral density at zero from a gamma/log-link fit to the low end of
/// the periodogram of the batched series. Throws on fit failure.
double spectral_density_zero_glm(const std::vector<double>& series);

/// GLM first, AR fallback; `force_ar` skips the GLM for deterministic runs.
double spectral_density_zero(const std::vector<double>& series, bool force_ar = false);

/// Z statistics comparing an early against a late block. Each block is a
/// set of per-component series of equal length. Measures: one per
/// component mean, then one per covariance pair (ordered (0,1), (0,2),
/// (1,2) as available).
std::vector<double> geweke_z(const std::vector<std::vector<double>>& early,
                             const std::vector<std::vector<double>>& late,
                             bool force_ar = false);

/// Sequential 10%/20%/30% vs final-50% bifurcation tests. A stage passes
/// iff every |Z| < 1.96; on the first pass K0 = stage fraction * K + 1.
/// All stages failing yields stage = failed (restart policy is the
/// caller's).
DiagnosticReport select_burn_in(const Chain& chain, bool force_ar = false);

}  // namespace bmd

#endif  // BMD_DIAGNOSTICS_HPP

#ifndef BMD_SCREEN_HPP
#define BMD_SCREEN_HPP

#include <vector>

#include "bmd/dataset.hpp"

namespace bmd {

/// Outcome of the pre-analysis trend screen. `s_max` is the steepest
/// origin-ray slope of the empirical extra risk over the scaled doses;
/// a nonpositive value marks the data as a data failure.
struct ScreenResult {
  bool passed = false;
  double s_max = 0.0;
  int argmax_index = 0;  // 1-based dose index in [2, m]
};

/// Empirical extra risks (Y_i/N_i - Y_1/N_1)/(1 - Y_1/N_1); element 0 is 0.
/// Throws std::domain_error when Y_1 = N_1 (degenerate background).
std::vector<double> empirical_extra_risk(const QuantalDataset& data);

/// Largest origin-ray slope over i = 2..m; ties resolve to the smallest
/// dose index.
ScreenResult screen(const QuantalDataset& data);

}  // namespace bmd

#endif  // BMD_SCREEN_HPP

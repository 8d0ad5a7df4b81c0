#include "bmd/screen.hpp"

#include <limits>
#include <stdexcept>

namespace bmd {

std::vector<double> empirical_extra_risk(const QuantalDataset& data) {
  const int m = data.groups();
  const double p0 = static_cast<double>(data.responders[0]) / data.group_sizes[0];
  if (p0 >= 1.0)
    throw std::domain_error("empirical_extra_risk: background risk is 1 (Y_1 = N_1)");
  std::vector<double> re(m, 0.0);
  for (int i = 1; i < m; ++i) {
    const double p = static_cast<double>(data.responders[i]) / data.group_sizes[i];
    re[i] = (p - p0) / (1.0 - p0);
  }
  return re;
}

ScreenResult screen(const QuantalDataset& data) {
  const std::vector<double> re = empirical_extra_risk(data);
  ScreenResult out;
  out.s_max = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < data.groups(); ++i) {
    const double slope = re[i] / data.doses[i];
    if (slope > out.s_max) {
      out.s_max = slope;
      out.argmax_index = i + 1;  // 1-based
    }
  }
  out.passed = out.s_max > 0.0;
  return out;
}

}  // namespace bmd

#ifndef BMD_DATASET_HPP
#define BMD_DATASET_HPP

#include <string>
#include <vector>

namespace bmd {

/// Quantal dose-response data. Doses are stored rescaled so the highest
/// dose equals 1; `dose_scale` holds the original highest dose so results
/// can be reported back in original units.
struct QuantalDataset {
  std::vector<double> doses;    // strictly increasing, d[0] = 0, back() = 1
  std::vector<int> responders;  // Y_i
  std::vector<int> group_sizes; // N_i
  double dose_scale = 1.0;

  int groups() const { return static_cast<int>(doses.size()); }
};

/// Validates and rescales raw (dose, Y, N) rows. Throws std::invalid_argument
/// on m < 2, a nonzero first dose, duplicate or unordered doses, Y outside
/// [0, N], or N < 1.
QuantalDataset make_dataset(std::vector<double> doses, std::vector<int> responders,
                            std::vector<int> group_sizes);

/// Parses a CSV file with header `dose,responders,n`. Rows are sorted by
/// dose before validation.
QuantalDataset load_dataset(const std::string& path);

}  // namespace bmd

#endif  // BMD_DATASET_HPP

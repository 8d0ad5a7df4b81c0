#include "bmd/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace bmd {

QuantalDataset make_dataset(std::vector<double> doses, std::vector<int> responders,
                            std::vector<int> group_sizes) {
  const size_t m = doses.size();
  if (m < 2) throw std::invalid_argument("dataset: need at least 2 dose groups");
  if (responders.size() != m || group_sizes.size() != m)
    throw std::invalid_argument("dataset: column lengths differ");
  if (doses.front() != 0.0)
    throw std::invalid_argument("dataset: first dose must be 0");
  for (size_t i = 1; i < m; ++i) {
    if (!(doses[i] > doses[i - 1]))
      throw std::invalid_argument("dataset: doses must be strictly increasing (duplicate dose?)");
  }
  for (size_t i = 0; i < m; ++i) {
    if (group_sizes[i] < 1)
      throw std::invalid_argument("dataset: group size < 1 in row " + std::to_string(i + 1));
    if (responders[i] < 0 || responders[i] > group_sizes[i])
      throw std::invalid_argument("dataset: responders outside [0, N] in row " +
                                  std::to_string(i + 1));
  }
  QuantalDataset ds;
  ds.dose_scale = doses.back();
  ds.doses.resize(m);
  for (size_t i = 0; i < m; ++i) ds.doses[i] = doses[i] / ds.dose_scale;
  ds.responders = std::move(responders);
  ds.group_sizes = std::move(group_sizes);
  return ds;
}

QuantalDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset file is empty: " + path);

  struct Row {
    double dose;
    int y, n;
  };
  std::vector<Row> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string field;
    Row r{};
    try {
      if (!std::getline(ss, field, ',')) throw std::invalid_argument("missing dose");
      r.dose = std::stod(field);
      if (!std::getline(ss, field, ',')) throw std::invalid_argument("missing responders");
      r.y = std::stoi(field);
      if (!std::getline(ss, field, ',')) throw std::invalid_argument("missing n");
      r.n = std::stoi(field);
    } catch (const std::exception&) {
      throw std::invalid_argument("dataset parse error at line " + std::to_string(lineno) +
                                  ": " + line);
    }
    rows.push_back(r);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.dose < b.dose; });

  std::vector<double> d;
  std::vector<int> y, n;
  for (const Row& r : rows) {
    d.push_back(r.dose);
    y.push_back(r.y);
    n.push_back(r.n);
  }
  return make_dataset(std::move(d), std::move(y), std::move(n));
}

}  // namespace bmd

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hybuse {

// In-memory labeled dataset: n feature rows (row-major) with integer labels
// in [0, class_count).
struct Dataset {
  std::vector<double> features;  // size() x input_dim, row-major
  std::vector<int> labels;
  std::size_t input_dim = 0;
  int class_count = 0;
  std::string name;

  std::size_t size() const { return labels.size(); }
  const double* row(std::size_t i) const {
    return features.data() + i * input_dim;
  }
};

}  // namespace hybuse

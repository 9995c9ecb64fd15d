#include "hybuse/prototypes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hybuse/kernels.hpp"
#include "hybuse/rng.hpp"

namespace hybuse {

const std::vector<double>& PrototypeSet::coords_for(int label) const {
  if (label < 0 || label >= class_count()) {
    throw std::invalid_argument("PrototypeSet: label out of range");
  }
  return prototypes[static_cast<std::size_t>(label)].point.coords();
}

PrototypeSet make_prototype_set(std::vector<IdealPrototype> prototypes,
                                PrototypePlacement placement) {
  const int classes = static_cast<int>(prototypes.size());
  if (classes < 2) {
    throw std::invalid_argument("prototype set needs at least two classes");
  }
  std::sort(prototypes.begin(), prototypes.end(),
            [](const IdealPrototype& a, const IdealPrototype& b) {
              return a.label < b.label;
            });
  const std::size_t dim = prototypes.front().point.dim();
  for (int i = 0; i < classes; ++i) {
    if (prototypes[static_cast<std::size_t>(i)].label != i) {
      throw std::invalid_argument(
          "prototype labels must be a permutation of 0..C-1");
    }
    if (prototypes[static_cast<std::size_t>(i)].point.dim() != dim) {
      throw std::invalid_argument("prototype dimensions differ");
    }
  }
  PrototypeSet set;
  set.prototypes = std::move(prototypes);
  set.dimension = static_cast<int>(dim);
  set.placement = placement;
  return set;
}

PrototypeSet uniform_circle_prototypes(int classes) {
  if (classes < 2) {
    throw std::invalid_argument(
        "uniform_circle_prototypes: need at least two classes");
  }
  std::vector<IdealPrototype> protos;
  protos.reserve(static_cast<std::size_t>(classes));
  for (int k = 0; k < classes; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / classes;
    protos.push_back(
        {IdealPoint({std::cos(angle), std::sin(angle)}), k});
  }
  return make_prototype_set(std::move(protos),
                            PrototypePlacement::uniform_circle);
}

namespace {

// Largest pairwise dot product of C unit rows (row-major C x d).
double max_pairwise_cosine(const std::vector<double>& rows, int classes,
                           int dim) {
  double worst = -1.0;
  for (int i = 0; i < classes; ++i) {
    for (int j = i + 1; j < classes; ++j) {
      worst = std::max(
          worst, kernels::dot(rows.data() + static_cast<std::size_t>(i) * dim,
                              rows.data() + static_cast<std::size_t>(j) * dim,
                              static_cast<std::size_t>(dim)));
    }
  }
  return worst;
}

void renormalize_row(double* row, int dim) {
  const double norm = std::sqrt(
      kernels::squared_norm(row, static_cast<std::size_t>(dim)));
  if (norm > 0.0) {
    kernels::scale(1.0 / norm, row, static_cast<std::size_t>(dim));
  }
}

}  // namespace

PrototypeSet separation_prototypes(int classes, int dimension, int iterations,
                                   double learning_rate, std::uint64_t seed) {
  if (classes < 2) {
    throw std::invalid_argument(
        "separation_prototypes: need at least two classes");
  }
  if (dimension < 3) {
    throw std::invalid_argument(
        "separation_prototypes: dimension must be >= 3 (use the uniform "
        "circle layout in 2-D)");
  }
  if (iterations < 1) {
    throw std::invalid_argument(
        "separation_prototypes: iterations must be >= 1");
  }
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument(
        "separation_prototypes: learning rate must be finite and > 0");
  }

  const std::size_t d = static_cast<std::size_t>(dimension);
  Rng rng(seed);
  std::vector<double> rows(static_cast<std::size_t>(classes) * d);
  for (int i = 0; i < classes; ++i) {
    const std::vector<double> v = rng.unit_vector(d);
    std::copy(v.begin(), v.end(), rows.begin() + static_cast<std::size_t>(i) * d);
  }

  std::vector<double> best = rows;
  double best_cos = max_pairwise_cosine(rows, classes, dimension);

  std::vector<double> gram(static_cast<std::size_t>(classes) *
                           static_cast<std::size_t>(classes));
  std::vector<double> grad(rows.size());
  std::vector<int> nearest(static_cast<std::size_t>(classes));

  for (int it = 0; it < iterations; ++it) {
    for (int i = 0; i < classes; ++i) {
      for (int j = 0; j < classes; ++j) {
        gram[static_cast<std::size_t>(i) * classes + j] =
            (i == j) ? -2.0
                     : kernels::dot(rows.data() + static_cast<std::size_t>(i) * d,
                                    rows.data() + static_cast<std::size_t>(j) * d,
                                    d);
      }
    }
    // Per row, the most-aligned other prototype; ties break to the lowest
    // index via strict >.
    for (int i = 0; i < classes; ++i) {
      int arg = (i == 0) ? 1 : 0;
      double top = gram[static_cast<std::size_t>(i) * classes + arg];
      for (int j = 0; j < classes; ++j) {
        if (j == i) continue;
        const double c = gram[static_cast<std::size_t>(i) * classes + j];
        if (c > top) {
          top = c;
          arg = j;
        }
      }
      nearest[static_cast<std::size_t>(i)] = arg;
    }

    std::fill(grad.begin(), grad.end(), 0.0);
    for (int i = 0; i < classes; ++i) {
      const int j = nearest[static_cast<std::size_t>(i)];
      kernels::axpy(1.0, rows.data() + static_cast<std::size_t>(j) * d,
                    grad.data() + static_cast<std::size_t>(i) * d, d);
      kernels::axpy(1.0, rows.data() + static_cast<std::size_t>(i) * d,
                    grad.data() + static_cast<std::size_t>(j) * d, d);
    }

    // Linearly decaying step keeps late iterations from oscillating around
    // the optimum of this piecewise-smooth objective.
    const double step = learning_rate *
                        (1.0 - static_cast<double>(it) / iterations) /
                        static_cast<double>(classes);
    for (int i = 0; i < classes; ++i) {
      kernels::axpy(-step, grad.data() + static_cast<std::size_t>(i) * d,
                    rows.data() + static_cast<std::size_t>(i) * d, d);
      renormalize_row(rows.data() + static_cast<std::size_t>(i) * d, dimension);
    }

    const double cur = max_pairwise_cosine(rows, classes, dimension);
    if (cur < best_cos) {
      best_cos = cur;
      best = rows;
    }
  }

  std::vector<IdealPrototype> protos;
  protos.reserve(static_cast<std::size_t>(classes));
  for (int i = 0; i < classes; ++i) {
    protos.push_back(
        {IdealPoint(std::vector<double>(
             best.begin() + static_cast<std::size_t>(i) * d,
             best.begin() + static_cast<std::size_t>(i + 1) * d)),
         i});
  }
  return make_prototype_set(std::move(protos), PrototypePlacement::separation);
}

PrototypeSet project_to_boundary(const std::vector<std::vector<double>>& dirs,
                                 const std::vector<int>& labels) {
  if (dirs.size() != labels.size()) {
    throw std::invalid_argument(
        "project_to_boundary: direction/label count mismatch");
  }
  std::vector<IdealPrototype> protos;
  protos.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    try {
      protos.push_back({IdealPoint(dirs[i]), labels[i]});
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument(
          "project_to_boundary: row " + std::to_string(i) +
          " has no direction (zero or non-finite vector)");
    }
  }
  return make_prototype_set(std::move(protos),
                            PrototypePlacement::external_projected);
}

SeparationMetrics separation_metrics(const PrototypeSet& set) {
  double worst = -1.0;
  const std::size_t d = static_cast<std::size_t>(set.dimension);
  for (int i = 0; i < set.class_count(); ++i) {
    for (int j = i + 1; j < set.class_count(); ++j) {
      worst = std::max(worst,
                       kernels::dot(set.coords_for(i).data(),
                                    set.coords_for(j).data(), d));
    }
  }
  SeparationMetrics m;
  m.max_cosine = worst;
  m.min_angle = std::acos(std::clamp(worst, -1.0, 1.0));
  return m;
}

}  // namespace hybuse

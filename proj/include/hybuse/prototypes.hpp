#pragma once

#include <cstdint>
#include <vector>

#include "hybuse/geometry.hpp"

// Class prototypes are fixed unit vectors on the ideal boundary, one per
// class, chosen before training and never updated.  Classifier quality
// depends on how well separated they are, so placement is its own step.

namespace hybuse {

enum class PrototypePlacement {
  uniform_circle,      // closed-form roots-of-unity layout (2-D only)
  separation,          // optimized max-pairwise-cosine layout
  external_projected,  // arbitrary directions pushed to the boundary
};

struct IdealPrototype {
  IdealPoint point;
  int label = 0;
};

struct PrototypeSet {
  std::vector<IdealPrototype> prototypes;  // sorted by label, 0..C-1
  int dimension = 0;
  PrototypePlacement placement = PrototypePlacement::external_projected;

  int class_count() const { return static_cast<int>(prototypes.size()); }
  const std::vector<double>& coords_for(int label) const;
};

// Validates labels (a permutation of 0..C-1), uniform dimension, and C >= 2;
// sorts by label.  All factory functions funnel through here.
PrototypeSet make_prototype_set(std::vector<IdealPrototype> prototypes,
                                PrototypePlacement placement);

// C prototypes at angles 2*pi*k/C on the unit circle (dimension 2).
PrototypeSet uniform_circle_prototypes(int classes);

// Prototypes on the (dimension-1)-sphere, dimension >= 3, placed by
// minimizing the largest pairwise cosine: projected gradient descent on
// (1/C) * sum_i max_{j != i} p_i . p_j with unit renormalization after each
// step, a linearly decaying step size, and best-iterate tracking.  Ties in
// the per-row max resolve to the lowest index.  Deterministic for a fixed
// seed.
PrototypeSet separation_prototypes(int classes, int dimension,
                                   int iterations = 1000,
                                   double learning_rate = 0.1,
                                   std::uint64_t seed = 0);

// Radially project the given directions onto the boundary; labels must be a
// permutation of 0..C-1 and no row may be zero.
PrototypeSet project_to_boundary(const std::vector<std::vector<double>>& dirs,
                                 const std::vector<int>& labels);

struct SeparationMetrics {
  double max_cosine = 0.0;   // largest pairwise cosine (smaller is better)
  double min_angle = 0.0;    // corresponding smallest pairwise angle, radians
};

SeparationMetrics separation_metrics(const PrototypeSet& set);

}  // namespace hybuse

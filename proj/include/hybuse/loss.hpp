#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hybuse/geometry.hpp"
#include "hybuse/prototypes.hpp"

// Penalized Busemann loss: for an embedded point z and its class's ideal
// prototype p,
//
//   loss(z, p) = busemann(p, z) - phi * log(1 - |z|^2).
//
// The penalty keeps minimizers strictly inside the ball; its weight phi
// scales linearly with embedding dimension so the learned distribution stays
// integrable in every dimension.

namespace hybuse {

// Penalty weight phi = slope * dimension; dimension >= 1, slope >= 0.
double phi_linear(int dimension, double slope);

// loss(z, p) = log(|p - z|^2) - (1 + phi) * log(1 - |z|^2).
double penalized_busemann_loss(const PoincarePoint& z, const IdealPoint& p,
                               double phi);

struct LossGradient {
  double value = 0.0;
  std::vector<double> grad;  // d loss / d x, same size as x
};

// Value and exact gradient of x -> loss(exp0(x), p) (the unclamped map; the
// exp0 safety clamp is inactive whenever |exp0(x)| < 1 - kBallEpsilon).
// At x = 0 the gradient is -p exactly.
LossGradient loss_gradient(std::span<const double> x, const IdealPoint& p,
                           double phi);

struct BatchLoss {
  double mean_loss = 0.0;
  std::vector<double> grads;  // n x dim row-major, per-example gradients
};

// Mean loss over n embedding inputs (row-major n x dim) with per-example
// gradients of the *mean*, i.e. each row of grads already carries the 1/n
// factor.  labels[i] selects the prototype for row i.
BatchLoss batch_loss(std::span<const double> inputs, std::size_t n,
                     std::span<const int> labels, const PrototypeSet& protos,
                     double phi);

// Integral of (1 - r^2)^(phi + 1 - d) r^(d - 1) over r in [0, 1 - delta]:
// the radial mass of the loss-induced density in dimension d truncated a
// distance delta from the boundary.  Converges as delta -> 0 exactly when
// phi > d - 2.  Adaptive Simpson quadrature with relative tolerance 1e-9;
// throws numeric_error when the quadrature cannot deliver a finite result.
double density_radial_integral(int dimension, double phi, double delta);

}  // namespace hybuse

#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Poincare ball of unit curvature.  Points live strictly inside the unit
// ball; directions to infinity live on its boundary (the ideal boundary).
// All coordinates are 64-bit doubles.

namespace hybuse {

// Margin used when mapping into the ball: exp0 / project_to_ball clamp to
// radius 1 - kBallEpsilon so that 1 - |z|^2 stays bounded away from zero.
inline constexpr double kBallEpsilon = 1e-5;

// A point strictly inside the unit ball.  The struct itself is plain data;
// operations taking a PoincarePoint verify |z| < 1 and throw
// std::domain_error otherwise.
struct PoincarePoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  double squared_norm() const;
};

// A unit vector on the ideal boundary.  The constructor normalizes, so the
// invariant | |p| - 1 | <= 1e-12 holds by construction; zero or non-finite
// input throws std::invalid_argument.
class IdealPoint {
 public:
  explicit IdealPoint(std::vector<double> coords);

  // Accept coordinates that are already unit-norm without rescaling them
  // (deserialization must not perturb stored values); throws
  // std::invalid_argument when | |p| - 1 | > 1e-12.
  static IdealPoint from_unit(std::vector<double> coords);

  const std::vector<double>& coords() const { return coords_; }
  std::size_t dim() const { return coords_.size(); }

 private:
  struct unit_tag {};
  IdealPoint(std::vector<double> coords, unit_tag) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

// Exponential map at the origin: x -> tanh(|x|/2) * x/|x|, the point reached
// after hyperbolic distance |x| along direction x.  The result is clamped to
// radius 1 - kBallEpsilon; exp0(0) = 0.
PoincarePoint exp0(std::span<const double> x);

// Geodesic distance arcosh(1 + 2|a-b|^2 / ((1-|a|^2)(1-|b|^2))), evaluated
// via log1p so small distances keep full precision.  Symmetric, and
// d(0, z) = ln((1+|z|)/(1-|z|)).
double geodesic_distance(const PoincarePoint& a, const PoincarePoint& b);

// Point at arc length t >= 0 on the geodesic from the origin toward ideal
// point p: p * tanh(t/2).  Deliberately not clamped (callers probe the
// boundary approach); throws std::domain_error for t < 0 or for t so large
// that tanh(t/2) rounds to 1 and the point would leave the open ball.
PoincarePoint geodesic_ray(const IdealPoint& p, double t);

// Busemann function of ideal point p: log(|p - z|^2 / (1 - |z|^2)).
// Zero at the origin, decreasing toward p, +infinity toward every other
// boundary point.
double busemann(const IdealPoint& p, const PoincarePoint& z);

// Truncated limit definition d(geodesic_ray(p, t), z) - t for t > 0;
// converges to busemann(p, z) as t grows (error ~ e^{-t}).  Kept as an
// independent code path so the closed form above can be cross-checked;
// evaluated in a cancellation-free arrangement so the truncation error
// stays visible down to ~1e-12.
double busemann_limit(const IdealPoint& p, const PoincarePoint& z, double t);

// Radially rescale x onto radius 1 - margin when it lies outside; points
// already inside are returned unchanged.  margin must be in (0, 1e-2].
PoincarePoint project_to_ball(std::span<const double> x,
                              double margin = kBallEpsilon);

}  // namespace hybuse

#include "hybuse/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hybuse/kernels.hpp"

namespace hybuse {
namespace {

void require_finite(std::span<const double> x, const char* who) {
  for (const double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(std::string(who) +
                                  ": non-finite coordinate");
    }
  }
}

double checked_inside(const PoincarePoint& z, const char* who) {
  const double s = z.squared_norm();
  if (!(s < 1.0)) {
    throw std::domain_error(std::string(who) +
                            ": point not strictly inside the unit ball");
  }
  return s;
}

}  // namespace

double PoincarePoint::squared_norm() const {
  return kernels::squared_norm(coords.data(), coords.size());
}

IdealPoint::IdealPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw std::invalid_argument("IdealPoint: empty coordinate vector");
  }
  require_finite(coords_, "IdealPoint");
  const double norm =
      std::sqrt(kernels::squared_norm(coords_.data(), coords_.size()));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("IdealPoint: zero direction");
  }
  kernels::scale(1.0 / norm, coords_.data(), coords_.size());
}

IdealPoint IdealPoint::from_unit(std::vector<double> coords) {
  if (coords.empty()) {
    throw std::invalid_argument("IdealPoint: empty coordinate vector");
  }
  require_finite(coords, "IdealPoint");
  const double norm =
      std::sqrt(kernels::squared_norm(coords.data(), coords.size()));
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw std::invalid_argument("IdealPoint: coordinates are not unit-norm");
  }
  return IdealPoint(std::move(coords), unit_tag{});
}

PoincarePoint exp0(std::span<const double> x) {
  require_finite(x, "exp0");
  PoincarePoint z;
  z.coords.assign(x.begin(), x.end());
  const double norm =
      std::sqrt(kernels::squared_norm(x.data(), x.size()));
  if (norm == 0.0) return z;
  kernels::scale(std::tanh(0.5 * norm) / norm, z.coords.data(),
                 z.coords.size());
  const double r =
      std::sqrt(kernels::squared_norm(z.coords.data(), z.coords.size()));
  if (r > 1.0 - kBallEpsilon) {
    kernels::scale((1.0 - kBallEpsilon) / r, z.coords.data(),
                   z.coords.size());
  }
  return z;
}

double geodesic_distance(const PoincarePoint& a, const PoincarePoint& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("geodesic_distance: dimension mismatch");
  }
  const double sa = checked_inside(a, "geodesic_distance");
  const double sb = checked_inside(b, "geodesic_distance");
  const double d2 =
      kernels::squared_distance(a.coords.data(), b.coords.data(), a.dim());
  // arcosh(1 + u) = log1p(u + sqrt(u * (u + 2))), accurate for small u.
  const double u = 2.0 * d2 / ((1.0 - sa) * (1.0 - sb));
  return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

PoincarePoint geodesic_ray(const IdealPoint& p, double t) {
  if (!(t >= 0.0)) {
    throw std::domain_error("geodesic_ray: arc length must be >= 0");
  }
  const double radius = std::tanh(0.5 * t);
  if (!(radius < 1.0)) {
    throw std::domain_error(
        "geodesic_ray: arc length too large, point would reach the boundary "
        "in 64-bit arithmetic");
  }
  PoincarePoint z;
  z.coords = p.coords();
  kernels::scale(radius, z.coords.data(), z.coords.size());
  return z;
}

double busemann(const IdealPoint& p, const PoincarePoint& z) {
  if (p.dim() != z.dim()) {
    throw std::invalid_argument("busemann: dimension mismatch");
  }
  const double s = checked_inside(z, "busemann");
  const double d2 =
      kernels::squared_distance(p.coords().data(), z.coords.data(), p.dim());
  return std::log(d2) - std::log1p(-s);
}

double busemann_limit(const IdealPoint& p, const PoincarePoint& z, double t) {
  if (!(t > 0.0)) {
    throw std::domain_error("busemann_limit: truncation time must be > 0");
  }
  if (p.dim() != z.dim()) {
    throw std::invalid_argument("busemann_limit: dimension mismatch");
  }
  const double s = checked_inside(z, "busemann_limit");
  // Same value as geodesic_distance(geodesic_ray(p, t), z) - t, but with the
  // ray's conformal factor 1 - tanh(t/2)^2 evaluated as sech(t/2)^2: the
  // subtraction form loses ~8 digits by t = 20, which would swamp the
  // e^-t truncation error this function exists to expose.
  const double radius = std::tanh(0.5 * t);
  if (!(radius < 1.0)) {
    throw std::domain_error(
        "busemann_limit: truncation time too large, the ray point would "
        "reach the boundary in 64-bit arithmetic");
  }
  std::vector<double> ray = p.coords();
  kernels::scale(radius, ray.data(), ray.size());
  const double d2 =
      kernels::squared_distance(ray.data(), z.coords.data(), ray.size());
  const double inv_cosh = 1.0 / std::cosh(0.5 * t);
  const double u = 2.0 * d2 / ((inv_cosh * inv_cosh) * (1.0 - s));
  return std::log1p(u + std::sqrt(u * (u + 2.0))) - t;
}

PoincarePoint project_to_ball(std::span<const double> x, double margin) {
  if (!(margin > 0.0) || !(margin <= 1e-2)) {
    throw std::invalid_argument("project_to_ball: margin outside (0, 1e-2]");
  }
  require_finite(x, "project_to_ball");
  PoincarePoint z;
  z.coords.assign(x.begin(), x.end());
  const double norm =
      std::sqrt(kernels::squared_norm(x.data(), x.size()));
  if (norm > 1.0 - margin) {
    kernels::scale((1.0 - margin) / norm, z.coords.data(), z.coords.size());
  }
  return z;
}

}  // namespace hybuse

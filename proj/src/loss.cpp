#include "hybuse/loss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hybuse/errors.hpp"
#include "hybuse/kernels.hpp"

namespace hybuse {
namespace {

void require_phi(double phi) {
  if (!(phi >= 0.0) || !std::isfinite(phi)) {
    throw std::invalid_argument("penalty weight must be finite and >= 0");
  }
}

}  // namespace

double phi_linear(int dimension, double slope) {
  if (dimension < 1) {
    throw std::invalid_argument("phi_linear: dimension must be >= 1");
  }
  if (!(slope >= 0.0) || !std::isfinite(slope)) {
    throw std::invalid_argument("phi_linear: slope must be finite and >= 0");
  }
  return slope * static_cast<double>(dimension);
}

double penalized_busemann_loss(const PoincarePoint& z, const IdealPoint& p,
                               double phi) {
  require_phi(phi);
  if (p.dim() != z.dim()) {
    throw std::invalid_argument("penalized_busemann_loss: dimension mismatch");
  }
  const double s = z.squared_norm();
  if (!(s < 1.0)) {
    throw std::domain_error(
        "penalized_busemann_loss: point not strictly inside the unit ball");
  }
  const double d2 =
      kernels::squared_distance(p.coords().data(), z.coords.data(), p.dim());
  // busemann(p, z) - phi * log(1 - |z|^2), with the two log(1 - |z|^2)
  // terms merged.
  return std::log(d2) - (1.0 + phi) * std::log1p(-s);
}

LossGradient loss_gradient(std::span<const double> x, const IdealPoint& p,
                           double phi) {
  require_phi(phi);
  const std::size_t dim = x.size();
  if (p.dim() != dim) {
    throw std::invalid_argument("loss_gradient: dimension mismatch");
  }
  for (const double v : x) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("loss_gradient: non-finite coordinate");
    }
  }

  LossGradient out;
  out.grad.resize(dim);

  const double norm = std::sqrt(kernels::squared_norm(x.data(), dim));
  if (norm == 0.0) {
    // Limit at the origin: the Busemann term contributes -p, the penalty
    // nothing.
    for (std::size_t i = 0; i < dim; ++i) out.grad[i] = -p.coords()[i];
    out.value = 0.0;
    return out;
  }

  // z = g * u with u = x/|x| and g = tanh(|x|/2); chain rule through the
  // radial map gives  grad = (g/n) v + (g' - g/n) (u.v) u  where v is the
  // gradient of the loss in z.
  const double g = std::tanh(0.5 * norm);
  const double g_prime = 0.5 * (1.0 - g * g);
  const double g_over_n = g / norm;

  std::vector<double> u(x.begin(), x.end());
  kernels::scale(1.0 / norm, u.data(), dim);
  std::vector<double> z = u;
  kernels::scale(g, z.data(), dim);

  const double d2 =
      kernels::squared_distance(p.coords().data(), z.data(), dim);
  const double one_minus_s = 1.0 - g * g;

  // v = 2 (z - p) / |p - z|^2 + 2 (1 + phi) z / (1 - |z|^2)
  std::vector<double> v(dim);
  const double busemann_coef = 2.0 / d2;
  const double penalty_coef = 2.0 * (1.0 + phi) / one_minus_s;
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = busemann_coef * (z[i] - p.coords()[i]) + penalty_coef * z[i];
  }

  const double radial = kernels::dot(u.data(), v.data(), dim);
  const double correction = (g_prime - g_over_n) * radial;
  for (std::size_t i = 0; i < dim; ++i) {
    out.grad[i] = g_over_n * v[i] + correction * u[i];
  }
  out.value = std::log(d2) - (1.0 + phi) * std::log1p(-(g * g));
  return out;
}

BatchLoss batch_loss(std::span<const double> inputs, std::size_t n,
                     std::span<const int> labels, const PrototypeSet& protos,
                     double phi) {
  if (n == 0) throw std::invalid_argument("batch_loss: empty batch");
  if (labels.size() != n) {
    throw std::invalid_argument("batch_loss: label count mismatch");
  }
  if (inputs.size() != n * static_cast<std::size_t>(protos.dimension)) {
    throw std::invalid_argument("batch_loss: input size mismatch");
  }
  const std::size_t dim = static_cast<std::size_t>(protos.dimension);

  BatchLoss out;
  out.grads.resize(n * dim);
  double total = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int label = labels[i];
    if (label < 0 || label >= protos.class_count()) {
      throw std::invalid_argument("batch_loss: label out of range at row " +
                                  std::to_string(i));
    }
    const IdealPoint& p = protos.prototypes[static_cast<std::size_t>(label)].point;
    LossGradient g =
        loss_gradient(inputs.subspan(i * dim, dim), p, phi);
    total += g.value;
    for (std::size_t k = 0; k < dim; ++k) {
      out.grads[i * dim + k] = inv_n * g.grad[k];
    }
  }
  out.mean_loss = total * inv_n;
  return out;
}

namespace {

// Integrand of the radial mass: (1 - r^2)^(phi + 1 - d) r^(d - 1), with
// 1 - r^2 evaluated as (1 - r)(1 + r) to keep precision near the boundary.
double radial_integrand(double r, double exponent, int dimension) {
  const double one_minus_r2 = (1.0 - r) * (1.0 + r);
  return std::pow(one_minus_r2, exponent) *
         std::pow(r, static_cast<double>(dimension - 1));
}

struct Quadrature {
  double exponent;
  int dimension;
  double abs_tol;

  double f(double r) const { return radial_integrand(r, exponent, dimension); }

  // Standard adaptive Simpson refinement with Richardson extrapolation.
  double refine(double a, double b, double fa, double fm, double fb,
                double whole, double tol, int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double h6 = (b - a) / 12.0;
    const double left = h6 * (fa + 4.0 * flm + fm);
    const double right = h6 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(left) || !std::isfinite(right)) {
      throw numeric_error("density_radial_integral: non-finite integrand");
    }
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }

  double integrate(double a, double b) const {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, abs_tol, 48);
  }
};

}  // namespace

double density_radial_integral(int dimension, double phi, double delta) {
  if (dimension < 2) {
    throw std::invalid_argument(
        "density_radial_integral: dimension must be >= 2");
  }
  require_phi(phi);
  if (!(delta > 0.0) || !(delta < 0.1)) {
    throw std::invalid_argument(
        "density_radial_integral: delta outside (0, 0.1)");
  }

  Quadrature q{phi + 1.0 - static_cast<double>(dimension), dimension, 0.0};
  const double upper = 1.0 - delta;

  // Coarse estimate to set the absolute tolerance for a 1e-9 relative
  // target; the integrand blows up only near r = 1, so a fixed composite
  // pass is a usable scale even in the divergent regime.
  double coarse = 0.0;
  constexpr int kPanels = 512;
  for (int i = 0; i < kPanels; ++i) {
    const double a = upper * i / kPanels;
    const double b = upper * (i + 1) / kPanels;
    coarse += (b - a) / 6.0 *
              (q.f(a) + 4.0 * q.f(0.5 * (a + b)) + q.f(b));
  }
  if (!std::isfinite(coarse)) {
    throw numeric_error(
        "density_radial_integral: integrand overflow (d=" +
        std::to_string(dimension) + ", phi=" + std::to_string(phi) + ")");
  }
  q.abs_tol = std::max(1e-9 * std::abs(coarse),
                       std::numeric_limits<double>::min());

  // Split at the start of the boundary layer so the adaptive pass spends its
  // depth where the integrand varies fastest.
  const double knee = 1.0 - 10.0 * delta;
  double result;
  if (knee > 0.0) {
    result = q.integrate(0.0, knee) + q.integrate(knee, upper);
  } else {
    result = q.integrate(0.0, upper);
  }
  if (!std::isfinite(result)) {
    throw numeric_error(
        "density_radial_integral: quadrature failed (d=" +
        std::to_string(dimension) + ", phi=" + std::to_string(phi) +
        ", delta=" + std::to_string(delta) + ")");
  }
  return result;
}

}  // namespace hybuse

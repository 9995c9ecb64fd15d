#include "hybuse/checks.hpp"

#include <cmath>
#include <stdexcept>

#include "hybuse/geometry.hpp"
#include "hybuse/kernels.hpp"
#include "hybuse/loss.hpp"
#include "hybuse/model.hpp"
#include "hybuse/prototypes.hpp"
#include "hybuse/rng.hpp"

namespace hybuse {

double SuiteResult::value(const std::string& name) const {
  for (const auto& [key, val] : values) {
    if (key == name) return val;
  }
  throw std::invalid_argument("SuiteResult: no value named '" + name + "'");
}

namespace {

void require(SuiteResult& r, bool ok, const std::string& condition) {
  if (!ok) r.failures.push_back(condition);
}

double rel_error(const std::vector<double>& got,
                 const std::vector<double>& want) {
  const double diff = std::sqrt(kernels::squared_distance(
      got.data(), want.data(), got.size()));
  const double scale =
      std::sqrt(kernels::squared_norm(want.data(), want.size()));
  return diff / std::max(scale, 1e-12);
}

std::vector<double> scaled_direction(Rng& rng, std::size_t dim, double lo,
                                     double hi) {
  std::vector<double> x = rng.unit_vector(dim);
  kernels::scale(rng.uniform(lo, hi), x.data(), dim);
  return x;
}

// ---- gradient suite -------------------------------------------------------

constexpr double kFdStep = 1e-6;

double loss_at(const std::vector<double>& x, const IdealPoint& p, double phi) {
  return penalized_busemann_loss(exp0(x), p, phi);
}

void run_loss_gradient_trials(SuiteResult& r, Rng& rng, bool corrupt) {
  constexpr int kTrials = 100;
  constexpr double kTol = 1e-6;
  double max_rel = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 10);
    // Radius capped so |exp0(x)| <= tanh(1.75) < 0.95: safely away from the
    // ball clamp, where the analytic form and finite differences agree.
    std::vector<double> x = scaled_direction(rng, dim, 0.05, 3.5);
    const IdealPoint p(rng.unit_vector(dim));
    const double phi = rng.uniform(0.0, 2.0);

    std::vector<double> analytic = loss_gradient(x, p, phi).grad;
    if (corrupt && trial == 0) analytic[0] += 1e-3;

    std::vector<double> fd(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      std::vector<double> xp = x;
      xp[k] = x[k] + kFdStep;
      const double hi = loss_at(xp, p, phi);
      xp[k] = x[k] - kFdStep;
      const double lo = loss_at(xp, p, phi);
      fd[k] = (hi - lo) / (2.0 * kFdStep);
    }
    max_rel = std::max(max_rel, rel_error(analytic, fd));
  }
  r.values.emplace_back("loss_trials", kTrials);
  r.values.emplace_back("loss_max_rel_err", max_rel);
  require(r, max_rel < kTol,
          "loss gradient vs finite differences: relative error < 1e-6");
}

double batch_mean_loss(const Model& m, const std::vector<std::vector<double>>& xs,
                       const std::vector<int>& labels,
                       const PrototypeSet& protos, double phi) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::vector<double> y = forward(m, xs[i]);
    total += penalized_busemann_loss(
        exp0(y), protos.prototypes[static_cast<std::size_t>(labels[i])].point,
        phi);
  }
  return total / static_cast<double>(xs.size());
}

void run_model_gradient_trials(SuiteResult& r, Rng& rng, std::uint64_t seed) {
  constexpr int kTrials = 20;
  constexpr double kTol = 1e-5;
  constexpr std::size_t kIn = 8, kHidden = 16, kOut = 4, kBatch = 6;
  constexpr int kClasses = 5;

  double max_rel = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    Model m = make_model(kIn, {kHidden}, kOut, seed + 1000 + trial);

    std::vector<std::vector<double>> dirs;
    std::vector<int> proto_labels;
    for (int c = 0; c < kClasses; ++c) {
      dirs.push_back(rng.unit_vector(kOut));
      proto_labels.push_back(c);
    }
    const PrototypeSet protos = project_to_boundary(dirs, proto_labels);
    const double phi = phi_linear(static_cast<int>(kOut),
                                  rng.uniform(0.05, 0.5));

    std::vector<std::vector<double>> xs(kBatch);
    std::vector<int> labels(kBatch);
    for (std::size_t i = 0; i < kBatch; ++i) {
      xs[i].resize(kIn);
      for (auto& v : xs[i]) v = rng.normal();
      labels[i] = static_cast<int>(rng.below(kClasses));
    }

    // Analytic parameter gradient of the batch mean loss.
    ParamGradients acc = ParamGradients::zeros_like(m);
    for (std::size_t i = 0; i < kBatch; ++i) {
      const std::vector<double> y = forward(m, xs[i]);
      LossGradient lg = loss_gradient(
          y, protos.prototypes[static_cast<std::size_t>(labels[i])].point,
          phi);
      kernels::scale(1.0 / static_cast<double>(kBatch), lg.grad.data(),
                     lg.grad.size());
      accumulate_gradients(m, xs[i], lg.grad, acc);
    }

    std::vector<double> analytic;
    std::vector<double> fd;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      auto probe = [&](double& param, double grad_value) {
        const double saved = param;
        param = saved + kFdStep;
        const double hi = batch_mean_loss(m, xs, labels, protos, phi);
        param = saved - kFdStep;
        const double lo = batch_mean_loss(m, xs, labels, protos, phi);
        param = saved;
        analytic.push_back(grad_value);
        fd.push_back((hi - lo) / (2.0 * kFdStep));
      };
      for (std::size_t k = 0; k < m.layers[l].weights.data.size(); ++k) {
        probe(m.layers[l].weights.data[k], acc.weights[l].data[k]);
      }
      for (std::size_t k = 0; k < m.layers[l].biases.size(); ++k) {
        probe(m.layers[l].biases[k], acc.biases[l][k]);
      }
    }
    max_rel = std::max(max_rel, rel_error(analytic, fd));
  }
  r.values.emplace_back("model_trials", kTrials);
  r.values.emplace_back("model_max_rel_err", max_rel);
  require(r, max_rel < kTol,
          "network parameter gradients vs finite differences: relative "
          "error < 1e-5");
}

// A compact closed-form expression for this gradient circulates with a
// trailing scalar term of ambiguous vector type.  Both readings are measured
// against the exact chain rule at phi = 1: scaling the radial direction
// x/|x| reproduces it; scaling the all-ones vector does not.
void run_formula_reading_trials(SuiteResult& r, Rng& rng) {
  constexpr int kTrials = 50;
  double ones_max = 0.0;
  double radial_max = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(trial % 9);
    const std::vector<double> x = scaled_direction(rng, dim, 0.1, 3.0);
    const IdealPoint p(rng.unit_vector(dim));
    const std::vector<double> exact = loss_gradient(x, p, 1.0).grad;

    const double n = std::sqrt(kernels::squared_norm(x.data(), dim));
    const double th = std::tanh(n);
    const double px = kernels::dot(p.coords().data(), x.data(), dim);
    const double denom = n - th * px;
    const double mid = px * (th / n - 1.0) / denom;
    const double tail = std::tanh(0.5 * n);

    for (std::size_t k = 0; k < dim; ++k) {
      const double t1 = (x[k] - p.coords()[k]) * th / denom;
      const double u = x[k] / n;
      const double ones_reading = t1 + mid + tail;
      const double radial_reading = t1 + (mid + tail) * u;
      ones_max = std::max(ones_max, std::abs(ones_reading - exact[k]));
      radial_max = std::max(radial_max, std::abs(radial_reading - exact[k]));
    }
  }
  r.values.emplace_back("formula_ones_vector_max_diff", ones_max);
  r.values.emplace_back("formula_radial_max_diff", radial_max);
  require(r, radial_max < 1e-10,
          "radial reading of the compact gradient formula matches the exact "
          "gradient at phi = 1");
}

}  // namespace

SuiteResult run_gradient_suite(std::uint64_t seed, bool corrupt_gradient) {
  SuiteResult r;
  r.suite = "gradient";
  Rng rng(seed);
  run_loss_gradient_trials(r, rng, corrupt_gradient);
  run_model_gradient_trials(r, rng, seed);
  run_formula_reading_trials(r, rng);
  r.passed = r.failures.empty();
  return r;
}

SuiteResult run_busemann_limit_suite(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "busemann-limit";
  constexpr int kTrials = 100;
  Rng rng(seed);

  double max_err_t20 = 0.0;
  double max_err_t10 = 0.0;
  int monotone_violations = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(trial % 5);
    const IdealPoint p(rng.unit_vector(dim));
    PoincarePoint z;
    z.coords = scaled_direction(rng, dim, 0.1, 0.9);

    const double closed = busemann(p, z);
    const double e5 = std::abs(busemann_limit(p, z, 5.0) - closed);
    const double e10 = std::abs(busemann_limit(p, z, 10.0) - closed);
    const double e20 = std::abs(busemann_limit(p, z, 20.0) - closed);
    max_err_t20 = std::max(max_err_t20, e20);
    max_err_t10 = std::max(max_err_t10, e10);
    if (!(e20 < e10 && e10 < e5)) ++monotone_violations;
  }
  r.values.emplace_back("trials", kTrials);
  r.values.emplace_back("max_abs_err_t20", max_err_t20);
  r.values.emplace_back("max_abs_err_t10", max_err_t10);
  r.values.emplace_back("monotone_violations", monotone_violations);
  require(r, max_err_t20 < 1e-6,
          "truncated limit at t = 20 within 1e-6 of the closed form");
  require(r, monotone_violations == 0,
          "truncation error decreases over t in {5, 10, 20} for every pair");
  r.passed = r.failures.empty();
  return r;
}

SuiteResult run_logreg_suite(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "logreg";
  const LogregReport report = logreg_equivalence_check(1000, seed);
  r.values.emplace_back("samples", report.samples);
  r.values.emplace_back("max_abs_deviation", report.max_abs_deviation);
  require(r, report.max_abs_deviation < 1e-10,
          "half loss plus ln 2 equals cross-entropy to 1e-10");
  r.passed = r.failures.empty();
  return r;
}

SuiteResult run_density_suite() {
  SuiteResult r;
  r.suite = "density";
  for (const int d : {4, 5, 6}) {
    const std::string tag = "d" + std::to_string(d);

    // Above the critical weight: the truncated mass converges.
    {
      const double phi = static_cast<double>(d) - 1.5;
      const double i4 = density_radial_integral(d, phi, 1e-4);
      const double i6 = density_radial_integral(d, phi, 1e-6);
      const double i8 = density_radial_integral(d, phi, 1e-8);
      const double refinement = std::abs(i6 - i8) / i8;
      const double growth = i8 / i4;
      r.values.emplace_back(tag + "_convergent_refinement", refinement);
      r.values.emplace_back(tag + "_convergent_growth", growth);
      require(r, refinement < 1e-2,
              tag + ": convergent integral stabilizes under refinement");
      require(r, growth < 1.5,
              tag + ": convergent integral grows negligibly toward the "
                    "boundary");
    }
    // Below it: the mass blows up like a power of the truncation.
    {
      const double phi = static_cast<double>(d) - 2.5;
      const double growth = density_radial_integral(d, phi, 1e-8) /
                            density_radial_integral(d, phi, 1e-4);
      r.values.emplace_back(tag + "_divergent_growth", growth);
      require(r, growth > 10.0, tag + ": divergent integral keeps growing");
    }
    // Exactly at it: logarithmic growth, ratio ~ log(1e8)/log(1e4) = 2.
    {
      const double phi = static_cast<double>(d - 2);
      const double growth = density_radial_integral(d, phi, 1e-8) /
                            density_radial_integral(d, phi, 1e-4);
      r.values.emplace_back(tag + "_boundary_growth", growth);
      require(r, growth > 1.5 && growth < 3.0,
              tag + ": boundary-weight integral grows logarithmically");
    }
  }
  r.passed = r.failures.empty();
  return r;
}

SuiteResult run_inference_equivalence_suite(std::uint64_t seed) {
  SuiteResult r;
  r.suite = "inference-equiv";
  constexpr int kPoints = 1000;
  Rng rng(seed);

  std::vector<PrototypeSet> configs;
  configs.push_back(uniform_circle_prototypes(10));
  configs.push_back(separation_prototypes(10, 5, 1000, 0.1, seed));
  {
    std::vector<std::vector<double>> dirs;
    std::vector<int> labels;
    for (int c = 0; c < 100; ++c) {
      dirs.push_back(rng.unit_vector(10));
      labels.push_back(c);
    }
    configs.push_back(project_to_boundary(dirs, labels));
  }

  int mismatches = 0;
  for (const PrototypeSet& protos : configs) {
    const std::size_t dim = static_cast<std::size_t>(protos.dimension);
    for (int i = 0; i < kPoints; ++i) {
      const PoincarePoint z = exp0(scaled_direction(rng, dim, 0.0, 6.0));
      const double phi = rng.uniform(0.0, 2.0);

      int by_cosine = 0;
      double best_dot = kernels::dot(z.coords.data(),
                                     protos.coords_for(0).data(), dim);
      int by_loss = 0;
      double best_loss = penalized_busemann_loss(
          z, protos.prototypes[0].point, phi);
      for (int c = 1; c < protos.class_count(); ++c) {
        const double dot = kernels::dot(z.coords.data(),
                                        protos.coords_for(c).data(), dim);
        if (dot > best_dot) {
          best_dot = dot;
          by_cosine = c;
        }
        const double loss = penalized_busemann_loss(
            z, protos.prototypes[static_cast<std::size_t>(c)].point, phi);
        if (loss < best_loss) {
          best_loss = loss;
          by_loss = c;
        }
      }
      if (by_cosine != by_loss) ++mismatches;
    }
  }
  r.values.emplace_back("configs", configs.size());
  r.values.emplace_back("points_per_config", kPoints);
  r.values.emplace_back("mismatches", mismatches);
  require(r, mismatches == 0,
          "max-cosine and min-loss decisions agree on every point");
  r.passed = r.failures.empty();
  return r;
}

std::vector<SuiteResult> run_all_suites(std::uint64_t seed,
                                        bool corrupt_gradient) {
  std::vector<SuiteResult> results;
  results.push_back(run_gradient_suite(seed, corrupt_gradient));
  results.push_back(run_busemann_limit_suite(seed));
  results.push_back(run_logreg_suite(seed));
  results.push_back(run_density_suite());
  results.push_back(run_inference_equivalence_suite(seed));
  return results;
}

}  // namespace hybuse

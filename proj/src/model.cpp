#include "hybuse/model.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "hybuse/kernels.hpp"
#include "hybuse/loss.hpp"
#include "hybuse/rng.hpp"

namespace hybuse {

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  m.data.assign(rows * cols, 0.0);
  return m;
}

std::size_t Model::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers) n += l.weights.data.size() + l.biases.size();
  return n;
}

Model make_model(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                 std::size_t output_dim, std::uint64_t seed) {
  if (input_dim == 0 || output_dim == 0) {
    throw std::invalid_argument("make_model: zero input or output dimension");
  }
  for (const std::size_t h : hidden) {
    if (h == 0) throw std::invalid_argument("make_model: zero hidden width");
  }

  std::vector<std::size_t> widths;
  widths.push_back(input_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(output_dim);

  Rng rng(seed);
  Model m;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    Layer layer;
    layer.weights = Matrix::zeros(widths[l + 1], widths[l]);
    layer.biases.assign(widths[l + 1], 0.0);
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    layer.activation =
        (l + 2 < widths.size()) ? Activation::relu : Activation::identity;
    m.layers.push_back(std::move(layer));
  }
  return m;
}

namespace {

void require_input(const Model& m, std::span<const double> x,
                   const char* who) {
  if (x.size() != m.input_dim()) {
    throw std::invalid_argument(std::string(who) +
                                ": input dimension mismatch");
  }
}

struct Trace {
  // inputs[l] is the input to layer l; pre[l] its pre-activation output.
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> pre;
};

std::vector<double> run_forward(const Model& m, std::span<const double> x,
                                Trace* trace) {
  std::vector<double> cur(x.begin(), x.end());
  for (const Layer& layer : m.layers) {
    if (trace) trace->inputs.push_back(cur);
    std::vector<double> out(layer.weights.rows);
    kernels::matvec(layer.weights.data.data(), layer.weights.rows,
                    layer.weights.cols, cur.data(), layer.biases.data(),
                    out.data());
    if (trace) trace->pre.push_back(out);
    if (layer.activation == Activation::relu) {
      kernels::relu(out.data(), out.data(), out.size());
    }
    cur = std::move(out);
  }
  return cur;
}

}  // namespace

std::vector<double> forward(const Model& m, std::span<const double> x) {
  require_input(m, x, "forward");
  return run_forward(m, x, nullptr);
}

ParamGradients ParamGradients::zeros_like(const Model& m) {
  ParamGradients g;
  for (const Layer& l : m.layers) {
    g.weights.push_back(Matrix::zeros(l.weights.rows, l.weights.cols));
    g.biases.emplace_back(l.biases.size(), 0.0);
  }
  return g;
}

void ParamGradients::reset() {
  for (Matrix& w : weights) std::fill(w.data.begin(), w.data.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
}

void accumulate_gradients(const Model& m, std::span<const double> x,
                          std::span<const double> upstream,
                          ParamGradients& acc) {
  require_input(m, x, "accumulate_gradients");
  if (upstream.size() != m.output_dim()) {
    throw std::invalid_argument(
        "accumulate_gradients: upstream dimension mismatch");
  }
  if (acc.weights.size() != m.layers.size()) {
    throw std::invalid_argument(
        "accumulate_gradients: gradient buffer shape mismatch");
  }

  Trace trace;
  run_forward(m, x, &trace);

  std::vector<double> delta(upstream.begin(), upstream.end());
  for (std::size_t l = m.layers.size(); l-- > 0;) {
    const Layer& layer = m.layers[l];
    if (layer.activation == Activation::relu) {
      kernels::relu_backward(trace.pre[l].data(), delta.data(), delta.size());
    }
    kernels::outer_acc(acc.weights[l].data.data(), layer.weights.rows,
                       layer.weights.cols, delta.data(),
                       trace.inputs[l].data());
    kernels::axpy(1.0, delta.data(), acc.biases[l].data(), delta.size());
    if (l > 0) {
      std::vector<double> prev(layer.weights.cols);
      kernels::matvec_transposed(layer.weights.data.data(),
                                 layer.weights.rows, layer.weights.cols,
                                 delta.data(), prev.data());
      delta = std::move(prev);
    }
  }
}

ParamGradients backward(const Model& m, std::span<const double> x,
                        std::span<const double> upstream) {
  ParamGradients g = ParamGradients::zeros_like(m);
  accumulate_gradients(m, x, upstream, g);
  return g;
}

AdamState AdamState::for_model(const Model& m) {
  AdamState s;
  for (const Layer& l : m.layers) {
    s.m_weights.push_back(Matrix::zeros(l.weights.rows, l.weights.cols));
    s.v_weights.push_back(Matrix::zeros(l.weights.rows, l.weights.cols));
    s.m_biases.emplace_back(l.biases.size(), 0.0);
    s.v_biases.emplace_back(l.biases.size(), 0.0);
  }
  return s;
}

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

void adam_update(double* param, double* m1, double* m2, const double* grad,
                 std::size_t n, double lr, double weight_decay,
                 double bias1, double bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = grad[i] + weight_decay * param[i];
    m1[i] = kBeta1 * m1[i] + (1.0 - kBeta1) * g;
    m2[i] = kBeta2 * m2[i] + (1.0 - kBeta2) * g * g;
    const double mhat = m1[i] / bias1;
    const double vhat = m2[i] / bias2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

}  // namespace

void adam_step(Model& m, AdamState& state, const ParamGradients& grads,
               double learning_rate, double weight_decay) {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("adam_step: learning rate must be > 0");
  }
  if (!(weight_decay >= 0.0) || !std::isfinite(weight_decay)) {
    throw std::invalid_argument("adam_step: weight decay must be >= 0");
  }
  if (grads.weights.size() != m.layers.size()) {
    throw std::invalid_argument("adam_step: gradient shape mismatch");
  }
  state.step += 1;
  const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    Layer& layer = m.layers[l];
    adam_update(layer.weights.data.data(), state.m_weights[l].data.data(),
                state.v_weights[l].data.data(), grads.weights[l].data.data(),
                layer.weights.data.size(), learning_rate, weight_decay, bias1,
                bias2);
    adam_update(layer.biases.data(), state.m_biases[l].data(),
                state.v_biases[l].data(), grads.biases[l].data(),
                layer.biases.size(), learning_rate, weight_decay, bias1,
                bias2);
  }
}

namespace {

void require_train_inputs(const Model& m, const Dataset& data,
                          const PrototypeSet& protos, const TrainConfig& cfg) {
  if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
  if (data.input_dim != m.input_dim()) {
    throw std::invalid_argument("train: dataset/model dimension mismatch");
  }
  if (static_cast<int>(m.output_dim()) != protos.dimension) {
    throw std::invalid_argument(
        "train: model output and prototype dimensions differ");
  }
  if (data.class_count > protos.class_count()) {
    throw std::invalid_argument("train: more classes than prototypes");
  }
  if (cfg.batch_size < 1) {
    throw std::invalid_argument("train: batch size must be >= 1");
  }
  if (cfg.epochs < 0) {
    throw std::invalid_argument("train: epochs must be >= 0");
  }
  if (!(cfg.learning_rate > 0.0)) {
    throw std::invalid_argument("train: learning rate must be > 0");
  }
  if (!(cfg.lr_decay_factor > 0.0)) {
    throw std::invalid_argument("train: lr decay factor must be > 0");
  }
}

}  // namespace

TrainHistory train(Model& m, const Dataset& train_data, const Dataset& val,
                   const PrototypeSet& protos, const TrainConfig& cfg) {
  require_train_inputs(m, train_data, protos, cfg);
  const double phi = phi_linear(protos.dimension, cfg.penalty_slope);
  const std::size_t n = train_data.size();
  const std::size_t dim = static_cast<std::size_t>(protos.dimension);

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double lr = cfg.learning_rate;
  ParamGradients acc = ParamGradients::zeros_like(m);
  AdamState adam = AdamState::for_model(m);

  TrainHistory history;
  history.reserve(static_cast<std::size_t>(cfg.epochs));

  std::vector<double> batch_outputs;
  std::vector<int> batch_labels;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    for (const int decay_epoch : cfg.lr_decay_epochs) {
      if (decay_epoch == epoch) lr /= cfg.lr_decay_factor;
    }
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(n, start + static_cast<std::size_t>(cfg.batch_size));
      const std::size_t bn = stop - start;

      batch_outputs.assign(bn * dim, 0.0);
      batch_labels.assign(bn, 0);
      for (std::size_t i = 0; i < bn; ++i) {
        const std::size_t idx = order[start + i];
        const std::vector<double> y = forward(
            m, std::span<const double>(train_data.row(idx),
                                       train_data.input_dim));
        std::copy(y.begin(), y.end(), batch_outputs.begin() + i * dim);
        batch_labels[i] = train_data.labels[idx];
      }

      const BatchLoss bl = batch_loss(batch_outputs, bn, batch_labels, protos,
                                      phi);
      loss_sum += bl.mean_loss * static_cast<double>(bn);

      acc.reset();
      for (std::size_t i = 0; i < bn; ++i) {
        const std::size_t idx = order[start + i];
        accumulate_gradients(
            m,
            std::span<const double>(train_data.row(idx),
                                    train_data.input_dim),
            std::span<const double>(bl.grads.data() + i * dim, dim), acc);
      }
      adam_step(m, adam, acc, lr, cfg.weight_decay);
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = loss_sum / static_cast<double>(n);
    stats.val_accuracy = val.size() > 0
                             ? accuracy(m, val, protos, phi)
                             : std::numeric_limits<double>::quiet_NaN();
    stats.learning_rate = lr;
    history.push_back(stats);
  }
  return history;
}

Prediction predict(const Model& m, std::span<const double> x,
                   const PrototypeSet& protos, double phi) {
  if (static_cast<int>(m.output_dim()) != protos.dimension) {
    throw std::invalid_argument(
        "predict: model output and prototype dimensions differ");
  }
  const std::vector<double> y = forward(m, x);
  const PoincarePoint z = exp0(y);

  Prediction pred;
  if (z.squared_norm() == 0.0) {
    pred.degenerate = true;
    pred.label = protos.prototypes.front().label;
    pred.confidence = 0.0;
    return pred;
  }

  int best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < protos.class_count(); ++c) {
    const double d = kernels::dot(z.coords.data(),
                                  protos.coords_for(c).data(), z.dim());
    if (d > best_dot) {
      best_dot = d;
      best = c;
    }
  }

#ifndef NDEBUG
  // The cosine rule must agree with direct loss minimization.
  int best_loss_label = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (int c = 0; c < protos.class_count(); ++c) {
    const double l =
        penalized_busemann_loss(z, protos.prototypes[c].point, phi);
    if (l < best_loss) {
      best_loss = l;
      best_loss_label = c;
    }
  }
  assert(best_loss_label == best);
#else
  (void)phi;
#endif

  pred.label = best;
  const PoincarePoint origin{std::vector<double>(z.dim(), 0.0)};
  pred.confidence = geodesic_distance(origin, z);
  return pred;
}

double accuracy(const Model& m, const Dataset& data, const PrototypeSet& protos,
                double phi) {
  if (data.size() == 0) throw std::invalid_argument("accuracy: empty dataset");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Prediction p = predict(
        m, std::span<const double>(data.row(i), data.input_dim), protos, phi);
    if (p.label == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

LogregReport logreg_equivalence_check(int samples, std::uint64_t seed) {
  if (samples < 1) {
    throw std::invalid_argument(
        "logreg_equivalence_check: need at least one sample");
  }
  Rng rng(seed);
  const IdealPoint plus(std::vector<double>{1.0});
  const IdealPoint minus(std::vector<double>{-1.0});

  LogregReport report;
  report.samples = samples;
  for (int i = 0; i < samples; ++i) {
    // Scores in [-8, 8]: wide enough to cover saturated sigmoids, narrow
    // enough that 1 - sigmoid(y) keeps full double precision.
    const double y = rng.uniform(-8.0, 8.0);
    const int cls = static_cast<int>(rng.below(2));

    const PoincarePoint z = exp0(std::span<const double>(&y, 1));
    const double loss =
        penalized_busemann_loss(z, cls == 1 ? plus : minus, 1.0);
    const double lhs = 0.5 * loss + std::log(2.0);

    const double sigmoid = 1.0 / (1.0 + std::exp(-y));
    const double one_minus_sigmoid = 1.0 / (1.0 + std::exp(y));
    const double rhs =
        cls == 1 ? -std::log(sigmoid) : -std::log(one_minus_sigmoid);

    report.max_abs_deviation =
        std::max(report.max_abs_deviation, std::abs(lhs - rhs));
  }
  return report;
}

}  // namespace hybuse

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybuse/dataset.hpp"
#include "hybuse/prototypes.hpp"

// Embedding networks: small dense models mapping feature vectors to the
// tangent space at the origin; exp0 carries the output into the ball, where
// the penalized Busemann loss against fixed ideal prototypes is minimized.
// Forward, backward, and the Adam update are written out explicitly.

namespace hybuse {

enum class Activation { identity, relu };

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major

  static Matrix zeros(std::size_t rows, std::size_t cols);
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }
};

struct Layer {
  Matrix weights;  // out_dim x in_dim
  std::vector<double> biases;
  Activation activation = Activation::identity;
};

struct Model {
  std::vector<Layer> layers;

  std::size_t input_dim() const { return layers.front().weights.cols; }
  std::size_t output_dim() const { return layers.back().weights.rows; }
  std::size_t parameter_count() const;
};

// Dense network with relu hidden layers and an identity output layer;
// hidden may be empty (a single linear map).  Weights are uniform in
// +-1/sqrt(fan_in), biases zero; deterministic in the seed.
Model make_model(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                 std::size_t output_dim, std::uint64_t seed);

// Network output for one example.
std::vector<double> forward(const Model& m, std::span<const double> x);

// Parameter gradients, same shapes as the model.
struct ParamGradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;

  static ParamGradients zeros_like(const Model& m);
  void reset();
};

// Backpropagate upstream = d loss / d output through the network at input x.
ParamGradients backward(const Model& m, std::span<const double> x,
                        std::span<const double> upstream);

// Same, accumulating into an existing gradient buffer (used per batch).
void accumulate_gradients(const Model& m, std::span<const double> x,
                          std::span<const double> upstream,
                          ParamGradients& acc);

// Adam with first/second moment estimates and bias correction
// (beta1 = 0.9, beta2 = 0.999, eps = 1e-8); weight decay is added to the
// gradient (L2 style) for every parameter.
struct AdamState {
  std::vector<Matrix> m_weights, v_weights;
  std::vector<std::vector<double>> m_biases, v_biases;
  std::int64_t step = 0;

  static AdamState for_model(const Model& m);
};

void adam_step(Model& m, AdamState& state, const ParamGradients& grads,
               double learning_rate, double weight_decay);

struct TrainConfig {
  double learning_rate = 5e-4;
  double weight_decay = 5e-5;
  int batch_size = 128;
  int epochs = 100;
  double penalty_slope = 0.1;        // phi = slope * embedding dimension
  std::vector<int> lr_decay_epochs;  // 1-based; lr /= factor at epoch start
  double lr_decay_factor = 10.0;
  std::uint64_t seed = 0;            // batch shuffling
};

struct EpochStats {
  int epoch = 0;             // 1-based
  double mean_loss = 0.0;    // mean training loss over the epoch
  double val_accuracy = 0.0; // NaN when no validation set was given
  double learning_rate = 0.0;
};

using TrainHistory = std::vector<EpochStats>;

// Mini-batch training of the full pipeline (network -> exp0 -> penalized
// Busemann loss against the given prototypes).  Deterministic: a fixed
// (model, data, config) triple yields a bitwise-identical final model.
// val may be empty.
TrainHistory train(Model& m, const Dataset& train_data, const Dataset& val,
                   const PrototypeSet& protos, const TrainConfig& cfg);

struct Prediction {
  int label = 0;
  double confidence = 0.0;  // hyperbolic distance of the embedding from 0
  bool degenerate = false;  // embedding landed exactly at the origin
};

// Nearest-prototype rule: the class whose ideal prototype has the largest
// cosine with the embedded point, which coincides with the class of smallest
// penalized Busemann loss (the penalty does not depend on the class).  Ties
// and the degenerate origin case resolve to the lowest label.
Prediction predict(const Model& m, std::span<const double> x,
                   const PrototypeSet& protos, double phi);

// Fraction of examples whose prediction matches the label.
double accuracy(const Model& m, const Dataset& data,
                const PrototypeSet& protos, double phi);

struct LogregReport {
  int samples = 0;
  double max_abs_deviation = 0.0;
};

// One-dimensional sanity check: with phi = 1 and boundary prototypes +-1,
// half the loss plus ln 2 equals the logistic-regression cross-entropy of
// the sigmoid-squashed score.  Returns the largest deviation observed over
// seeded random (score, class) pairs.
LogregReport logreg_equivalence_check(int samples, std::uint64_t seed);

}  // namespace hybuse

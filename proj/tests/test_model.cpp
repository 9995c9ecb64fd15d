#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "hybuse/dataset.hpp"
#include "hybuse/geometry.hpp"
#include "hybuse/loss.hpp"
#include "hybuse/model.hpp"
#include "hybuse/prototypes.hpp"
#include "hybuse/rng.hpp"

using namespace hybuse;

namespace {

Model single_layer(Matrix weights, std::vector<double> biases) {
  Model m;
  m.layers.push_back(
      {std::move(weights), std::move(biases), Activation::identity});
  return m;
}

std::vector<double> flatten(const Model& m) {
  std::vector<double> out;
  for (const Layer& layer : m.layers) {
    out.insert(out.end(), layer.weights.data.begin(), layer.weights.data.end());
    out.insert(out.end(), layer.biases.begin(), layer.biases.end());
  }
  return out;
}

// Collects mutable pointers to every parameter, in a stable order, so finite
// differences can walk the whole model.
std::vector<double*> parameter_pointers(Model& m) {
  std::vector<double*> ptrs;
  for (Layer& layer : m.layers) {
    for (double& w : layer.weights.data) ptrs.push_back(&w);
    for (double& b : layer.biases) ptrs.push_back(&b);
  }
  return ptrs;
}

std::vector<double> gradient_values(const ParamGradients& g) {
  std::vector<double> out;
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    out.insert(out.end(), g.weights[l].data.begin(), g.weights[l].data.end());
    out.insert(out.end(), g.biases[l].begin(), g.biases[l].end());
  }
  return out;
}

Dataset separable_1d(int per_class, double gap, std::uint64_t seed) {
  Rng rng(seed);
  Dataset data;
  data.input_dim = 1;
  data.class_count = 2;
  data.name = "separable-1d";
  for (int i = 0; i < per_class; ++i) {
    data.features.push_back(-gap + 0.1 * rng.normal());
    data.labels.push_back(0);
    data.features.push_back(gap + 0.1 * rng.normal());
    data.labels.push_back(1);
  }
  return data;
}

PrototypeSet line_prototypes() {
  return project_to_boundary({{-1.0}, {1.0}}, {0, 1});
}

}  // namespace

TEST_CASE("forward matches hand arithmetic") {
  // Identity weights pass the input through.
  Model identity = single_layer(Matrix{2, 2, {1.0, 0.0, 0.0, 1.0}}, {0.0, 0.0});
  const std::vector<double> x{0.3, -0.7};
  CHECK(forward(identity, x) == x);

  // Zero weights and biases collapse everything to zero.
  Model zero = single_layer(Matrix::zeros(2, 3), {0.0, 0.0});
  CHECK(forward(zero, std::vector<double>{1.0, 2.0, 3.0}) ==
        std::vector<double>{0.0, 0.0});

  // W = [[1,2],[3,4]], b = (1,1), x = (1,1) -> (4, 8).
  Model fixed = single_layer(Matrix{2, 2, {1.0, 2.0, 3.0, 4.0}}, {1.0, 1.0});
  CHECK(forward(fixed, std::vector<double>{1.0, 1.0}) ==
        std::vector<double>{4.0, 8.0});
}

TEST_CASE("forward validates the input dimension") {
  Model m = make_model(3, {4}, 2, 0);
  CHECK(m.parameter_count() == 3 * 4 + 4 + 4 * 2 + 2);
  CHECK_THROWS_AS(forward(m, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
}

TEST_CASE("make_model is seeded and shape-checked") {
  const Model a = make_model(5, {7}, 3, 11);
  const Model b = make_model(5, {7}, 3, 11);
  const Model c = make_model(5, {7}, 3, 12);
  CHECK(flatten(a) == flatten(b));
  CHECK(flatten(a) != flatten(c));
  CHECK(a.input_dim() == 5);
  CHECK(a.output_dim() == 3);
  CHECK(a.layers.front().activation == Activation::relu);
  CHECK(a.layers.back().activation == Activation::identity);

  CHECK_THROWS_AS(make_model(0, {}, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_model(2, {0}, 2, 0), std::invalid_argument);
}

TEST_CASE("backward of a linear layer is the outer-product rule") {
  Model m = single_layer(Matrix{2, 3, {0.5, -1.0, 2.0, 1.5, 0.25, -0.75}},
                         {0.1, -0.2});
  const std::vector<double> x{1.0, -2.0, 3.0};
  const std::vector<double> upstream{2.0, -1.0};

  const ParamGradients g = backward(m, x, upstream);
  // d out_i / d W_ij = x_j, scaled by upstream_i.
  CHECK(g.weights[0].data ==
        std::vector<double>{2.0, -4.0, 6.0, -1.0, 2.0, -3.0});
  CHECK(g.biases[0] == upstream);

  const ParamGradients zero = backward(m, x, std::vector<double>{0.0, 0.0});
  CHECK(zero.weights[0].data == std::vector<double>(6, 0.0));
  CHECK(zero.biases[0] == std::vector<double>(2, 0.0));
}

TEST_CASE("backward matches finite differences through a relu MLP") {
  Model m = make_model(3, {5}, 2, 0);
  Rng rng(1);
  const std::vector<double> c{0.7, -1.3};  // fixed linear readout

  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> x(3);
    for (double& v : x) v = rng.normal();

    // Scalar objective: c . forward(x); its upstream gradient is c.
    const ParamGradients analytic = backward(m, x, c);
    const std::vector<double> analytic_flat = gradient_values(analytic);

    const auto params = parameter_pointers(m);
    REQUIRE(params.size() == analytic_flat.size());
    constexpr double kStep = 1e-6;
    for (std::size_t k = 0; k < params.size(); ++k) {
      const double saved = *params[k];
      *params[k] = saved + kStep;
      const std::vector<double> up = forward(m, x);
      *params[k] = saved - kStep;
      const std::vector<double> down = forward(m, x);
      *params[k] = saved;
      const double fd =
          ((c[0] * up[0] + c[1] * up[1]) - (c[0] * down[0] + c[1] * down[1])) /
          (2.0 * kStep);
      CHECK(analytic_flat[k] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("accumulate_gradients sums per-example contributions") {
  Model m = make_model(2, {}, 2, 3);
  const std::vector<double> x1{0.5, -0.25};
  const std::vector<double> x2{-1.0, 2.0};
  const std::vector<double> u1{1.0, 0.5};
  const std::vector<double> u2{-0.5, 2.0};

  ParamGradients acc = ParamGradients::zeros_like(m);
  accumulate_gradients(m, x1, u1, acc);
  accumulate_gradients(m, x2, u2, acc);

  const ParamGradients g1 = backward(m, x1, u1);
  const ParamGradients g2 = backward(m, x2, u2);
  const std::vector<double> sum_flat = gradient_values(acc);
  const std::vector<double> g1_flat = gradient_values(g1);
  const std::vector<double> g2_flat = gradient_values(g2);
  for (std::size_t k = 0; k < sum_flat.size(); ++k) {
    CHECK(sum_flat[k] == doctest::Approx(g1_flat[k] + g2_flat[k]).epsilon(1e-14));
  }

  acc.reset();
  for (double v : gradient_values(acc)) CHECK(v == 0.0);
}

TEST_CASE("adam first step moves by the sign of the gradient") {
  Model m = single_layer(Matrix{1, 1, {0.5}}, {0.25});
  AdamState state = AdamState::for_model(m);

  ParamGradients g = ParamGradients::zeros_like(m);
  g.weights[0].data[0] = 2.0;
  g.biases[0][0] = -3.0;

  adam_step(m, state, g, 0.01, 0.0);
  // Bias correction makes the first step lr * g/(|g| + eps), i.e. ~lr.
  CHECK(m.layers[0].weights.data[0] == doctest::Approx(0.49).epsilon(1e-7));
  CHECK(m.layers[0].biases[0] == doctest::Approx(0.26).epsilon(1e-7));
  CHECK(state.step == 1);
}

TEST_CASE("adam leaves parameters alone without gradient or decay") {
  Model m = make_model(3, {4}, 2, 5);
  const std::vector<double> before = flatten(m);
  AdamState state = AdamState::for_model(m);
  const ParamGradients zero = ParamGradients::zeros_like(m);
  adam_step(m, state, zero, 0.01, 0.0);
  CHECK(flatten(m) == before);
}

TEST_CASE("adam applies weight decay as an L2 gradient term") {
  Model m = single_layer(Matrix{1, 1, {2.0}}, {0.0});
  AdamState state = AdamState::for_model(m);
  const ParamGradients zero = ParamGradients::zeros_like(m);
  adam_step(m, state, zero, 0.01, 0.1);
  // Effective gradient 0.1 * 2.0 pulls the weight toward zero by ~lr.
  CHECK(m.layers[0].weights.data[0] < 2.0);
  CHECK(m.layers[0].weights.data[0] == doctest::Approx(1.99).epsilon(1e-6));
  // Zero bias feels no decay.
  CHECK(m.layers[0].biases[0] == 0.0);
}

TEST_CASE("two adam steps on a constant gradient move further than one") {
  Model one_step = single_layer(Matrix{1, 1, {1.0}}, {0.0});
  Model two_steps = single_layer(Matrix{1, 1, {1.0}}, {0.0});
  ParamGradients g = ParamGradients::zeros_like(one_step);
  g.weights[0].data[0] = 1.0;

  AdamState s1 = AdamState::for_model(one_step);
  adam_step(one_step, s1, g, 0.01, 0.0);

  AdamState s2 = AdamState::for_model(two_steps);
  adam_step(two_steps, s2, g, 0.01, 0.0);
  adam_step(two_steps, s2, g, 0.01, 0.0);

  const double drop1 = 1.0 - one_step.layers[0].weights.data[0];
  const double drop2 = 1.0 - two_steps.layers[0].weights.data[0];
  CHECK(drop2 > drop1);
}

TEST_CASE("adam validates shapes and rates") {
  Model m = make_model(2, {}, 2, 0);
  AdamState state = AdamState::for_model(m);
  const ParamGradients g = ParamGradients::zeros_like(m);
  CHECK_THROWS_AS(adam_step(m, state, g, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(adam_step(m, state, g, 0.01, -1.0), std::invalid_argument);

  Model deeper = make_model(2, {4}, 2, 0);
  const ParamGradients wrong = ParamGradients::zeros_like(deeper);
  CHECK_THROWS_AS(adam_step(m, state, wrong, 0.01, 0.0),
                  std::invalid_argument);
}

TEST_CASE("training a separable 1-D problem converges to full accuracy") {
  const Dataset data = separable_1d(20, 2.0, 3);
  const PrototypeSet protos = line_prototypes();
  Model m = make_model(1, {}, 1, 0);

  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 8;
  cfg.epochs = 40;  // seed 0 starts the weight negative; give Adam room
  cfg.penalty_slope = 1.0;  // phi = 1 in one dimension
  cfg.seed = 0;

  const TrainHistory history = train(m, data, Dataset{}, protos, cfg);
  REQUIRE(history.size() == 40);
  for (std::size_t e = 1; e < 10; ++e) {
    CHECK(history[e].mean_loss < history[e - 1].mean_loss);
  }
  CHECK(accuracy(m, data, protos, 1.0) == 1.0);
  // No validation set was supplied.
  CHECK(std::isnan(history.front().val_accuracy));
}

TEST_CASE("training is deterministic and honors zero epochs") {
  const Dataset data = separable_1d(10, 1.5, 9);
  const PrototypeSet protos = line_prototypes();

  Model frozen = make_model(1, {}, 1, 7);
  const std::vector<double> before = flatten(frozen);
  TrainConfig none;
  none.epochs = 0;
  const TrainHistory empty_history =
      train(frozen, data, Dataset{}, protos, none);
  CHECK(empty_history.empty());
  CHECK(flatten(frozen) == before);

  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.02;
  cfg.penalty_slope = 1.0;
  cfg.seed = 42;

  Model a = make_model(1, {}, 1, 7);
  Model b = make_model(1, {}, 1, 7);
  const TrainHistory ha = train(a, data, Dataset{}, protos, cfg);
  const TrainHistory hb = train(b, data, Dataset{}, protos, cfg);
  CHECK(flatten(a) == flatten(b));  // bitwise
  REQUIRE(ha.size() == hb.size());
  for (std::size_t e = 0; e < ha.size(); ++e) {
    CHECK(ha[e].mean_loss == hb[e].mean_loss);
  }
}

TEST_CASE("the learning-rate schedule divides at the configured epochs") {
  const Dataset data = separable_1d(10, 1.5, 1);
  const PrototypeSet protos = line_prototypes();
  Model m = make_model(1, {}, 1, 0);

  TrainConfig cfg;
  cfg.epochs = 4;
  cfg.learning_rate = 0.1;
  cfg.lr_decay_epochs = {2, 4};
  cfg.lr_decay_factor = 10.0;
  cfg.penalty_slope = 1.0;

  const TrainHistory history = train(m, data, Dataset{}, protos, cfg);
  REQUIRE(history.size() == 4);
  CHECK(history[0].learning_rate == doctest::Approx(0.1));
  CHECK(history[1].learning_rate == doctest::Approx(0.01));
  CHECK(history[2].learning_rate == doctest::Approx(0.01));
  CHECK(history[3].learning_rate == doctest::Approx(0.001));
  CHECK(history[0].epoch == 1);
  CHECK(history[3].epoch == 4);
}

TEST_CASE("train validates dataset, prototypes, and config") {
  const Dataset data = separable_1d(5, 1.0, 0);
  const PrototypeSet protos = line_prototypes();
  Model m = make_model(1, {}, 1, 0);

  Dataset empty;
  TrainConfig cfg;
  CHECK_THROWS_AS(train(m, empty, Dataset{}, protos, cfg),
                  std::invalid_argument);

  Model wrong_in = make_model(2, {}, 1, 0);
  CHECK_THROWS_AS(train(wrong_in, data, Dataset{}, protos, cfg),
                  std::invalid_argument);

  Model wrong_out = make_model(1, {}, 3, 0);
  CHECK_THROWS_AS(train(wrong_out, data, Dataset{}, protos, cfg),
                  std::invalid_argument);

  TrainConfig bad = cfg;
  bad.batch_size = 0;
  CHECK_THROWS_AS(train(m, data, Dataset{}, protos, bad),
                  std::invalid_argument);
  bad = cfg;
  bad.epochs = -1;
  CHECK_THROWS_AS(train(m, data, Dataset{}, protos, bad),
                  std::invalid_argument);
}

TEST_CASE("predict picks the aligned prototype and reports confidence") {
  const PrototypeSet protos = uniform_circle_prototypes(4);
  Model identity =
      single_layer(Matrix{2, 2, {1.0, 0.0, 0.0, 1.0}}, {0.0, 0.0});

  // Along each prototype direction the prediction is that class.
  for (int k = 0; k < 4; ++k) {
    std::vector<double> x = protos.coords_for(k);
    for (double& v : x) v *= 0.8;
    const Prediction pred = predict(identity, x, protos, 0.4);
    CHECK(pred.label == k);
    CHECK_FALSE(pred.degenerate);
    // Confidence is the hyperbolic distance of exp0(x) from the origin,
    // which for |x| = 0.8 is exactly 0.8 (exp0 inverts the radial metric).
    CHECK(pred.confidence == doctest::Approx(0.8).epsilon(1e-12));
  }
}

TEST_CASE("predict flags the degenerate origin embedding") {
  const PrototypeSet protos = uniform_circle_prototypes(3);
  Model zero = single_layer(Matrix::zeros(2, 2), {0.0, 0.0});
  const Prediction pred =
      predict(zero, std::vector<double>{0.4, -0.9}, protos, 0.3);
  CHECK(pred.degenerate);
  CHECK(pred.label == 0);
  CHECK(pred.confidence == 0.0);
}

TEST_CASE("accuracy counts matching predictions") {
  const PrototypeSet protos = line_prototypes();
  Model identity = single_layer(Matrix{1, 1, {1.0}}, {0.0});

  Dataset data;
  data.input_dim = 1;
  data.class_count = 2;
  data.features = {-1.0, 1.0, 2.0, -0.5};
  data.labels = {0, 1, 1, 1};  // last one is wrong on purpose
  CHECK(accuracy(identity, data, protos, 1.0) == doctest::Approx(0.75));
}

TEST_CASE("the 1-D loss halves into logistic cross-entropy") {
  const LogregReport report = logreg_equivalence_check(1000, 0);
  CHECK(report.samples == 1000);
  CHECK(report.max_abs_deviation < 1e-10);

  // Hand values of the identity itself: at y = 0 both sides are ln 2; at
  // y = 4 with the aligned prototype both sides are -ln(sigmoid(4)).
  const IdealPoint plus(std::vector<double>{1.0});
  const double ln2 = std::log(2.0);
  const double at_zero =
      penalized_busemann_loss(exp0(std::vector<double>{0.0}), plus, 1.0) / 2.0 +
      ln2;
  CHECK(at_zero == doctest::Approx(ln2).epsilon(1e-15));

  const double at_four =
      penalized_busemann_loss(exp0(std::vector<double>{4.0}), plus, 1.0) / 2.0 +
      ln2;
  const double sigmoid4 = 1.0 / (1.0 + std::exp(-4.0));
  CHECK(at_four == doctest::Approx(-std::log(sigmoid4)).epsilon(1e-12));
  CHECK(at_four == doctest::Approx(0.01815).epsilon(1e-3));
}

// hybuse: place ideal prototypes, train and evaluate hyperbolic prototype
// classifiers, verify the mathematical core, and export embeddings.
//
// Exit codes: 0 success, 1 validation/check failure, 2 usage error,
// 3 I/O or file-format error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hybuse/checks.hpp"
#include "hybuse/data_io.hpp"
#include "hybuse/errors.hpp"
#include "hybuse/geometry.hpp"
#include "hybuse/loss.hpp"
#include "hybuse/model.hpp"
#include "hybuse/prototypes.hpp"

namespace {

using nlohmann::ordered_json;

// Command-line input that is syntactically valid to CLI11 but semantically
// wrong (bad method/dimension combination, malformed dataset locator, ...).
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

hybuse::Dataset load_data(const std::string& spec) {
  try {
    return hybuse::load_dataset_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- place ----------------------------------------------------------------

struct PlaceOptions {
  int classes = 0;
  int dims = 0;
  std::string method = "auto";
  int iters = 1000;
  double lr = 0.1;
  std::uint64_t seed = 0;
  std::string out;
  bool json = false;
};

int cmd_place(const PlaceOptions& opt) {
  if (opt.classes < 2) throw UsageError("--classes must be >= 2");
  if (opt.dims < 2) throw UsageError("--dims must be >= 2");

  std::string method = opt.method;
  if (method == "auto") method = opt.dims == 2 ? "uniform" : "separation";
  if (method != "uniform" && method != "separation") {
    throw UsageError("--method must be 'uniform' or 'separation'");
  }
  if (method == "uniform" && opt.dims != 2) {
    throw UsageError("the uniform circle layout is 2-D only (--dims 2)");
  }
  if (method == "separation" && opt.dims < 3) {
    throw UsageError(
        "separation placement needs --dims >= 3; use --method uniform in "
        "2-D");
  }

  const hybuse::PrototypeSet set =
      method == "uniform"
          ? hybuse::uniform_circle_prototypes(opt.classes)
          : hybuse::separation_prototypes(opt.classes, opt.dims, opt.iters,
                                          opt.lr, opt.seed);
  hybuse::save_prototypes_csv(set, opt.out);
  const hybuse::SeparationMetrics metrics = hybuse::separation_metrics(set);

  if (opt.json) {
    ordered_json j;
    j["classes"] = opt.classes;
    j["dims"] = opt.dims;
    j["method"] = method;
    j["out"] = opt.out;
    j["max_cosine"] = metrics.max_cosine;
    j["min_angle"] = metrics.min_angle;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("wrote %d prototypes (dim %d, method %s) to %s\n",
                set.class_count(), set.dimension, method.c_str(),
                opt.out.c_str());
    std::printf("max_cosine %.6f  min_angle %.6f rad\n", metrics.max_cosine,
                metrics.min_angle);
  }
  return 0;
}

// ---- train ------------------------------------------------------------

struct TrainOptions {
  std::string data_spec;
  std::string protos_path;
  std::string checkpoint_path;
  std::string metrics_path;
  std::vector<std::size_t> hidden;
  int embed_dim = 0;  // 0: take the prototype dimension
  double slope = 0.1;
  int epochs = 100;
  double lr = 5e-4;
  double weight_decay = 5e-5;
  int batch = 128;
  double val_fraction = 0.2;
  std::uint64_t seed = 0;
  std::uint64_t split_seed = 0;
  bool standardize = false;
  std::vector<int> decay_epochs;
  double decay_factor = 10.0;
  bool deterministic = true;
  bool json = false;
};

int cmd_train(const TrainOptions& opt) {
  const hybuse::PrototypeSet protos =
      hybuse::load_prototypes_csv(opt.protos_path);
  if (opt.embed_dim != 0 && opt.embed_dim != protos.dimension) {
    std::cerr << "error: prototype dimension " << protos.dimension
              << " does not match requested embedding dimension "
              << opt.embed_dim << "\n";
    return 1;
  }

  hybuse::Dataset data = load_data(opt.data_spec);
  if (data.class_count > protos.class_count()) {
    std::cerr << "error: dataset has " << data.class_count
              << " classes but the prototype file provides only "
              << protos.class_count() << "\n";
    return 1;
  }

  hybuse::SplitSpec split_spec;
  split_spec.validation_fraction = opt.val_fraction;
  split_spec.seed = opt.split_seed;
  auto [train_set, val_set] = hybuse::split(data, split_spec);

  std::optional<hybuse::Standardization> standardization;
  if (opt.standardize) {
    standardization = hybuse::fit_standardization(train_set);
    hybuse::apply_standardization(train_set, *standardization);
    hybuse::apply_standardization(val_set, *standardization);
  }

  hybuse::Model model = hybuse::make_model(
      data.input_dim, opt.hidden,
      static_cast<std::size_t>(protos.dimension), opt.seed);

  hybuse::TrainConfig cfg;
  cfg.learning_rate = opt.lr;
  cfg.weight_decay = opt.weight_decay;
  cfg.batch_size = opt.batch;
  cfg.epochs = opt.epochs;
  cfg.penalty_slope = opt.slope;
  cfg.lr_decay_epochs = opt.decay_epochs;
  cfg.lr_decay_factor = opt.decay_factor;
  cfg.seed = opt.seed;

  const hybuse::TrainHistory history =
      hybuse::train(model, train_set, val_set, protos, cfg);

  hybuse::Checkpoint ckpt;
  ckpt.model = std::move(model);
  ckpt.penalty_slope = opt.slope;
  ckpt.prototype_file_reference = opt.protos_path;
  ckpt.standardization = standardization;
  ckpt.training_config = cfg;
  if (!history.empty()) {
    ckpt.final_metrics.mean_loss = history.back().mean_loss;
    ckpt.final_metrics.val_accuracy = history.back().val_accuracy;
    ckpt.final_metrics.epochs_run = history.back().epoch;
  } else {
    ckpt.final_metrics.mean_loss =
        std::numeric_limits<double>::quiet_NaN();
    ckpt.final_metrics.val_accuracy =
        std::numeric_limits<double>::quiet_NaN();
    ckpt.final_metrics.epochs_run = 0;
  }
  hybuse::save_checkpoint(ckpt, opt.checkpoint_path);
  if (!opt.metrics_path.empty()) {
    hybuse::write_metrics_jsonl(history, opt.metrics_path);
  }

  if (opt.json) {
    ordered_json j;
    j["train_examples"] = train_set.size();
    j["val_examples"] = val_set.size();
    j["epochs_run"] = ckpt.final_metrics.epochs_run;
    j["final_mean_loss"] = std::isfinite(ckpt.final_metrics.mean_loss)
                               ? ordered_json(ckpt.final_metrics.mean_loss)
                               : ordered_json(nullptr);
    j["final_val_accuracy"] =
        std::isfinite(ckpt.final_metrics.val_accuracy)
            ? ordered_json(ckpt.final_metrics.val_accuracy)
            : ordered_json(nullptr);
    j["checkpoint"] = opt.checkpoint_path;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("trained %d epochs on %zu examples (%zu validation)\n",
                ckpt.final_metrics.epochs_run, train_set.size(),
                val_set.size());
    if (!history.empty()) {
      std::printf("final mean loss %.6f  final val accuracy %.4f\n",
                  ckpt.final_metrics.mean_loss,
                  ckpt.final_metrics.val_accuracy);
    }
    std::printf("checkpoint written to %s\n", opt.checkpoint_path.c_str());
  }
  return 0;
}

// ---- eval -------------------------------------------------------------

struct EvalOptions {
  std::string checkpoint_path;
  std::string data_spec;
  std::string protos_path;  // optional override of the checkpoint reference
  bool json = false;
};

struct EvalReport {
  std::size_t examples = 0;
  double accuracy = 0.0;
  std::vector<int> per_class_correct;
  std::vector<int> per_class_total;
  double mean_distance_correct = std::numeric_limits<double>::quiet_NaN();
  double mean_distance_incorrect = std::numeric_limits<double>::quiet_NaN();
};

EvalReport evaluate(const hybuse::Checkpoint& ckpt,
                    const hybuse::PrototypeSet& protos,
                    const hybuse::Dataset& data) {
  const double phi =
      hybuse::phi_linear(protos.dimension, ckpt.penalty_slope);
  EvalReport report;
  report.examples = data.size();
  report.per_class_correct.assign(
      static_cast<std::size_t>(data.class_count), 0);
  report.per_class_total.assign(static_cast<std::size_t>(data.class_count),
                                0);
  double dist_correct = 0.0, dist_incorrect = 0.0;
  std::size_t n_correct = 0, n_incorrect = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const hybuse::Prediction pred = hybuse::predict(
        ckpt.model,
        std::span<const double>(data.row(i), data.input_dim), protos, phi);
    const int label = data.labels[i];
    report.per_class_total[static_cast<std::size_t>(label)] += 1;
    if (pred.label == label) {
      report.per_class_correct[static_cast<std::size_t>(label)] += 1;
      dist_correct += pred.confidence;
      ++n_correct;
    } else {
      dist_incorrect += pred.confidence;
      ++n_incorrect;
    }
  }
  report.accuracy =
      static_cast<double>(n_correct) / static_cast<double>(data.size());
  if (n_correct > 0) {
    report.mean_distance_correct =
        dist_correct / static_cast<double>(n_correct);
  }
  if (n_incorrect > 0) {
    report.mean_distance_incorrect =
        dist_incorrect / static_cast<double>(n_incorrect);
  }
  return report;
}

// Load the prototype set referenced by the checkpoint or the override path;
// apply the recorded standardization to the dataset.
struct LoadedRun {
  hybuse::Checkpoint ckpt;
  hybuse::PrototypeSet protos;
  hybuse::Dataset data;
};

LoadedRun load_run(const std::string& checkpoint_path,
                   const std::string& protos_override,
                   const std::string& data_spec) {
  LoadedRun run{hybuse::load_checkpoint(checkpoint_path),
                hybuse::PrototypeSet{},
                hybuse::Dataset{}};
  const std::string protos_path = !protos_override.empty()
                                      ? protos_override
                                      : run.ckpt.prototype_file_reference;
  if (protos_path.empty()) {
    throw UsageError(
        "checkpoint does not reference a prototype file; pass --protos");
  }
  run.protos = hybuse::load_prototypes_csv(protos_path);
  if (static_cast<std::size_t>(run.protos.dimension) !=
      run.ckpt.model.output_dim()) {
    throw std::invalid_argument(
        "prototype dimension " + std::to_string(run.protos.dimension) +
        " does not match checkpoint output dimension " +
        std::to_string(run.ckpt.model.output_dim()));
  }
  run.data = load_data(data_spec);
  if (run.data.input_dim != run.ckpt.model.input_dim()) {
    throw std::invalid_argument(
        "dataset feature dimension " + std::to_string(run.data.input_dim) +
        " does not match checkpoint input dimension " +
        std::to_string(run.ckpt.model.input_dim()));
  }
  if (run.data.class_count > run.protos.class_count()) {
    throw std::invalid_argument(
        "dataset has more classes than the prototype set");
  }
  if (run.ckpt.standardization) {
    hybuse::apply_standardization(run.data, *run.ckpt.standardization);
  }
  return run;
}

int cmd_eval(const EvalOptions& opt) {
  const LoadedRun run =
      load_run(opt.checkpoint_path, opt.protos_path, opt.data_spec);
  const EvalReport report = evaluate(run.ckpt, run.protos, run.data);

  const double gap =
      report.mean_distance_correct - report.mean_distance_incorrect;
  if (opt.json) {
    ordered_json j;
    j["examples"] = report.examples;
    j["accuracy"] = report.accuracy;
    j["per_class"] = ordered_json::array();
    for (std::size_t c = 0; c < report.per_class_total.size(); ++c) {
      ordered_json jc;
      jc["label"] = c;
      jc["total"] = report.per_class_total[c];
      jc["correct"] = report.per_class_correct[c];
      jc["accuracy"] = report.per_class_total[c] > 0
                           ? ordered_json(static_cast<double>(
                                              report.per_class_correct[c]) /
                                          report.per_class_total[c])
                           : ordered_json(nullptr);
      j["per_class"].push_back(std::move(jc));
    }
    j["mean_origin_distance_correct"] =
        std::isfinite(report.mean_distance_correct)
            ? ordered_json(report.mean_distance_correct)
            : ordered_json(nullptr);
    j["mean_origin_distance_incorrect"] =
        std::isfinite(report.mean_distance_incorrect)
            ? ordered_json(report.mean_distance_incorrect)
            : ordered_json(nullptr);
    j["origin_distance_gap"] =
        std::isfinite(gap) ? ordered_json(gap) : ordered_json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("accuracy %.4f over %zu examples\n", report.accuracy,
                report.examples);
    for (std::size_t c = 0; c < report.per_class_total.size(); ++c) {
      if (report.per_class_total[c] == 0) {
        std::printf("  class %zu: no examples\n", c);
      } else {
        std::printf("  class %zu: %.4f (%d/%d)\n", c,
                    static_cast<double>(report.per_class_correct[c]) /
                        report.per_class_total[c],
                    report.per_class_correct[c], report.per_class_total[c]);
      }
    }
    std::printf("mean origin distance: correct %s, incorrect %s, gap %s\n",
                std::isfinite(report.mean_distance_correct)
                    ? std::to_string(report.mean_distance_correct).c_str()
                    : "n/a",
                std::isfinite(report.mean_distance_incorrect)
                    ? std::to_string(report.mean_distance_incorrect).c_str()
                    : "n/a",
                std::isfinite(gap) ? std::to_string(gap).c_str() : "n/a");
  }
  return 0;
}

// ---- check ------------------------------------------------------------

struct CheckOptions {
  std::string suite = "all";
  std::uint64_t seed = 0;
  bool corrupt_gradient = false;
  bool json = false;
};

int cmd_check(const CheckOptions& opt) {
  std::vector<hybuse::SuiteResult> results;
  if (opt.suite == "all") {
    results = hybuse::run_all_suites(opt.seed, opt.corrupt_gradient);
  } else if (opt.suite == "gradient") {
    results.push_back(
        hybuse::run_gradient_suite(opt.seed, opt.corrupt_gradient));
  } else if (opt.suite == "busemann-limit") {
    results.push_back(hybuse::run_busemann_limit_suite(opt.seed));
  } else if (opt.suite == "logreg") {
    results.push_back(hybuse::run_logreg_suite(opt.seed));
  } else if (opt.suite == "density") {
    results.push_back(hybuse::run_density_suite());
  } else if (opt.suite == "inference-equiv") {
    results.push_back(hybuse::run_inference_equivalence_suite(opt.seed));
  } else {
    throw UsageError("unknown suite '" + opt.suite +
                     "' (expected all, gradient, busemann-limit, logreg, "
                     "density, or inference-equiv)");
  }

  bool all_passed = true;
  if (opt.json) {
    ordered_json out = ordered_json::array();
    for (const hybuse::SuiteResult& r : results) {
      all_passed = all_passed && r.passed;
      ordered_json j;
      j["suite"] = r.suite;
      j["passed"] = r.passed;
      j["values"] = ordered_json::object();
      for (const auto& [k, v] : r.values) j["values"][k] = v;
      j["failures"] = r.failures;
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << "\n";
  } else {
    for (const hybuse::SuiteResult& r : results) {
      all_passed = all_passed && r.passed;
      std::printf("%-16s %s\n", r.suite.c_str(),
                  r.passed ? "passed" : "FAILED");
      for (const auto& [k, v] : r.values) {
        std::printf("    %-32s %.12g\n", k.c_str(), v);
      }
      for (const std::string& f : r.failures) {
        std::printf("    failed: %s\n", f.c_str());
      }
    }
  }
  return all_passed ? 0 : 1;
}

// ---- export -----------------------------------------------------------

struct ExportOptions {
  std::string checkpoint_path;
  std::string data_spec;
  std::string protos_path;
  std::string out;
  bool json = false;
};

struct EmbeddedExample {
  std::vector<double> z;
  int label = 0;
  int predicted = 0;
  double origin_distance = 0.0;
};

std::vector<EmbeddedExample> embed_dataset(const LoadedRun& run) {
  const double phi =
      hybuse::phi_linear(run.protos.dimension, run.ckpt.penalty_slope);
  std::vector<EmbeddedExample> rows;
  rows.reserve(run.data.size());
  for (std::size_t i = 0; i < run.data.size(); ++i) {
    const std::span<const double> x(run.data.row(i), run.data.input_dim);
    const hybuse::PoincarePoint z = hybuse::exp0(hybuse::forward(run.ckpt.model, x));
    const hybuse::Prediction pred =
        hybuse::predict(run.ckpt.model, x, run.protos, phi);
    rows.push_back(
        {z.coords, run.data.labels[i], pred.label, pred.confidence});
  }
  return rows;
}

void write_embedding_csv(const std::vector<EmbeddedExample>& rows,
                         std::size_t dim, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw hybuse::io_error("cannot open '" + path + "' for writing");
  for (std::size_t k = 0; k < dim; ++k) std::fprintf(f, "z%zu,", k);
  std::fprintf(f, "label,predicted,origin_distance\n");
  char buf[64];
  for (const EmbeddedExample& row : rows) {
    for (const double v : row.z) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::fprintf(f, "%s,", buf);
    }
    std::snprintf(buf, sizeof buf, "%.17g", row.origin_distance);
    std::fprintf(f, "%d,%d,%s\n", row.label, row.predicted, buf);
  }
  if (std::fclose(f) != 0) throw hybuse::io_error("error writing '" + path + "'");
}

const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                            "#bcbd22", "#17becf"};

// Ball-to-screen map: 1000x1000 viewbox, ball radius 480 px, y flipped.
double svg_x(double x) { return 500.0 + 480.0 * x; }
double svg_y(double y) { return 500.0 - 480.0 * y; }

void write_embedding_svg(const std::vector<EmbeddedExample>& rows,
                         const hybuse::PrototypeSet& protos,
                         const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw hybuse::io_error("cannot open '" + path + "' for writing");
  std::fprintf(f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" "
               "viewBox=\"0 0 1000 1000\">\n");
  std::fprintf(f, "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n");
  std::fprintf(f,
               "<circle cx=\"500\" cy=\"500\" r=\"480\" fill=\"none\" "
               "stroke=\"black\" stroke-width=\"2\"/>\n");
  for (const EmbeddedExample& row : rows) {
    std::fprintf(
        f,
        "<circle class=\"point\" cx=\"%.2f\" cy=\"%.2f\" r=\"3\" "
        "fill=\"%s\" fill-opacity=\"0.6\"/>\n",
        svg_x(row.z[0]), svg_y(row.z[1]),
        kPalette[static_cast<std::size_t>(row.label) % 10]);
  }
  for (const hybuse::IdealPrototype& proto : protos.prototypes) {
    const double px = proto.point.coords()[0];
    const double py = proto.point.coords()[1];
    std::fprintf(f,
                 "<circle class=\"prototype\" cx=\"%.2f\" cy=\"%.2f\" "
                 "r=\"7\" fill=\"%s\" stroke=\"black\" "
                 "stroke-width=\"1.5\"/>\n",
                 svg_x(px), svg_y(py),
                 kPalette[static_cast<std::size_t>(proto.label) % 10]);
    // Label just inside the boundary so it stays in the viewbox.
    std::fprintf(f,
                 "<text class=\"prototype-label\" x=\"%.2f\" y=\"%.2f\" "
                 "font-size=\"20\" text-anchor=\"middle\">%d</text>\n",
                 svg_x(px * 0.92), svg_y(py * 0.92) + 7.0, proto.label);
  }
  std::fprintf(f, "</svg>\n");
  if (std::fclose(f) != 0) throw hybuse::io_error("error writing '" + path + "'");
}

int cmd_export(const ExportOptions& opt) {
  const bool svg = opt.out.size() >= 4 &&
                   opt.out.compare(opt.out.size() - 4, 4, ".svg") == 0;
  const bool csv = opt.out.size() >= 4 &&
                   opt.out.compare(opt.out.size() - 4, 4, ".csv") == 0;
  if (!svg && !csv) {
    throw UsageError("--out must end in .csv or .svg");
  }

  const LoadedRun run =
      load_run(opt.checkpoint_path, opt.protos_path, opt.data_spec);
  if (svg && run.ckpt.model.output_dim() != 2) {
    throw UsageError("SVG export needs a 2-D embedding; checkpoint has " +
                     std::to_string(run.ckpt.model.output_dim()));
  }

  const std::vector<EmbeddedExample> rows = embed_dataset(run);
  if (svg) {
    write_embedding_svg(rows, run.protos, opt.out);
  } else {
    write_embedding_csv(rows, run.ckpt.model.output_dim(), opt.out);
  }

  if (opt.json) {
    ordered_json j;
    j["rows"] = rows.size();
    j["format"] = svg ? "svg" : "csv";
    j["out"] = opt.out;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("wrote %zu embedded examples to %s\n", rows.size(),
                opt.out.c_str());
  }
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const hybuse::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hybuse::format_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hybuse::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const hybuse::numeric_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "hyperbolic prototype classification: boundary prototypes, Busemann "
      "training, verification suites"};
  app.require_subcommand(1);

  PlaceOptions place;
  CLI::App* place_cmd =
      app.add_subcommand("place", "place ideal prototypes on the boundary");
  place_cmd->add_option("--classes", place.classes, "number of classes")
      ->required();
  place_cmd->add_option("--dims", place.dims, "embedding dimension")
      ->required();
  place_cmd->add_option("--method", place.method,
                        "uniform | separation (default: uniform when "
                        "--dims 2, separation otherwise)");
  place_cmd->add_option("--iters", place.iters,
                        "separation optimizer iterations");
  place_cmd->add_option("--lr", place.lr, "separation optimizer step size");
  place_cmd->add_option("--seed", place.seed, "separation optimizer seed");
  place_cmd->add_option("--out", place.out, "output prototype CSV")
      ->required();
  place_cmd->add_flag("--json", place.json, "JSON report on stdout");

  TrainOptions train;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train an embedding model");
  train_cmd
      ->add_option("--data", train.data_spec,
                   "dataset locator (csv:PATH:LABELCOL, idx:IMAGES:LABELS, "
                   "blobs:C,I,PER,SCALE,SIGMA,SEED)")
      ->required();
  train_cmd->add_option("--protos", train.protos_path, "prototype CSV")
      ->required();
  train_cmd
      ->add_option("--checkpoint", train.checkpoint_path,
                   "output checkpoint JSON")
      ->required();
  train_cmd->add_option("--metrics", train.metrics_path,
                        "output metrics JSONL");
  train_cmd->add_option("--hidden", train.hidden,
                        "hidden layer widths (relu)");
  train_cmd->add_option("--embed-dim", train.embed_dim,
                        "expected embedding dimension (cross-checked "
                        "against the prototype file)");
  train_cmd->add_option("--slope", train.slope, "penalty slope s in phi=s*d");
  train_cmd->add_option("--epochs", train.epochs, "training epochs");
  train_cmd->add_option("--lr", train.lr, "Adam learning rate");
  train_cmd->add_option("--weight-decay", train.weight_decay,
                        "L2 weight decay");
  train_cmd->add_option("--batch", train.batch, "mini-batch size");
  train_cmd->add_option("--val-fraction", train.val_fraction,
                        "validation fraction of the dataset");
  train_cmd->add_option("--seed", train.seed,
                        "model init and batch shuffling seed");
  train_cmd->add_option("--split-seed", train.split_seed,
                        "train/validation split seed");
  train_cmd->add_flag("--standardize", train.standardize,
                      "standardize features using training-split statistics");
  train_cmd->add_option("--decay-epochs", train.decay_epochs,
                        "epochs at whose start the learning rate is divided "
                        "by --decay-factor");
  train_cmd->add_option("--decay-factor", train.decay_factor,
                        "learning-rate decay factor");
  train_cmd->add_flag("--deterministic,!--no-deterministic",
                      train.deterministic,
                      "deterministic training (always on; flag kept for "
                      "scripting compatibility)");
  train_cmd->add_flag("--json", train.json, "JSON report on stdout");

  EvalOptions eval;
  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval_cmd
      ->add_option("--checkpoint", eval.checkpoint_path, "checkpoint JSON")
      ->required();
  eval_cmd->add_option("--data", eval.data_spec, "dataset locator")
      ->required();
  eval_cmd->add_option("--protos", eval.protos_path,
                       "prototype CSV (default: the checkpoint's reference)");
  eval_cmd->add_flag("--json", eval.json, "JSON report on stdout");

  CheckOptions check;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "run verification suites for the mathematical core");
  check_cmd->add_option("--suite", check.suite,
                        "all | gradient | busemann-limit | logreg | density "
                        "| inference-equiv");
  check_cmd->add_option("--seed", check.seed, "suite seed");
  check_cmd
      ->add_flag("--corrupt-gradient", check.corrupt_gradient,
                 "negative-control hook: perturb one analytic gradient "
                 "component so the gradient suite must fail")
      ->group("");  // hidden from --help
  check_cmd->add_flag("--json", check.json, "JSON report on stdout");

  ExportOptions exp;
  CLI::App* export_cmd = app.add_subcommand(
      "export", "export embeddings for a dataset (.csv or .svg)");
  export_cmd
      ->add_option("--checkpoint", exp.checkpoint_path, "checkpoint JSON")
      ->required();
  export_cmd->add_option("--data", exp.data_spec, "dataset locator")
      ->required();
  export_cmd->add_option("--protos", exp.protos_path,
                         "prototype CSV (default: the checkpoint's "
                         "reference)");
  export_cmd->add_option("--out", exp.out, "output file (.csv or .svg)")
      ->required();
  export_cmd->add_flag("--json", exp.json, "JSON report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (place_cmd->parsed()) return guarded([&] { return cmd_place(place); });
  if (train_cmd->parsed()) return guarded([&] { return cmd_train(train); });
  if (eval_cmd->parsed()) return guarded([&] { return cmd_eval(eval); });
  if (check_cmd->parsed()) return guarded([&] { return cmd_check(check); });
  if (export_cmd->parsed()) return guarded([&] { return cmd_export(exp); });
  return 2;
}

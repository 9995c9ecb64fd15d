#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hybuse/dataset.hpp"
#include "hybuse/model.hpp"
#include "hybuse/prototypes.hpp"

// Dataset loaders and on-disk formats.  Text parsers report the offending
// line via parse_error; binary parsers throw format_error; unopenable files
// throw io_error.

namespace hybuse {

// Numeric CSV: one example per row, the given column (0-based) holding a
// non-negative integer label, every other column a feature.  Blank lines are
// skipped; CRLF is tolerated.  Classes are 0..max(label); a warning is
// printed to stderr when some class in that range has no examples.
Dataset load_csv(const std::string& path, int label_column);

// IDX image/label file pair (big-endian, unsigned bytes); pixels are scaled
// to [0, 1].
Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path);

struct BlobsReport {
  double min_center_distance = 0.0;
  double mean_center_distance = 0.0;
};

// Gaussian class blobs: class centers of norm center_scale, isotropic noise
// of the given sigma.  When classes <= input_dim the center directions form
// a random orthonormal frame (every pair of centers then lies a distance
// center_scale * sqrt(2) apart); otherwise they are independent random unit
// directions.  Deterministic in the seed.
Dataset synthetic_blobs(int classes, int input_dim, int per_class,
                        double center_scale, double noise_sigma,
                        std::uint64_t seed, BlobsReport* report = nullptr);

struct SplitSpec {
  double validation_fraction = 0.2;
  std::uint64_t seed = 0;
  bool stratified = true;  // per-class fractions preserved within +-1 example
};

// Deterministic (train, validation) partition; throws when either side
// would be empty.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec);

// Per-feature affine normalization (x - mean) / stddev, fitted on training
// data and recorded in checkpoints so evaluation applies the same transform.
struct Standardization {
  std::vector<double> mean;
  std::vector<double> stddev;  // floored at 1e-12
};

Standardization fit_standardization(const Dataset& data);
void apply_standardization(Dataset& data, const Standardization& s);

// Prototype CSV: one row per class, label then coordinates, printed with 17
// significant digits so a write/read round trip reproduces every double
// bitwise.
void save_prototypes_csv(const PrototypeSet& set, const std::string& path);
PrototypeSet load_prototypes_csv(const std::string& path);

struct FinalMetrics {
  double mean_loss = 0.0;
  double val_accuracy = 0.0;
  int epochs_run = 0;
};

// A trained model plus everything needed to reproduce and apply it.
struct Checkpoint {
  Model model;
  double penalty_slope = 0.1;
  std::string prototype_file_reference;
  std::optional<Standardization> standardization;
  TrainConfig training_config;
  FinalMetrics final_metrics;
};

// JSON serialization (schema_version 1).  Serialization is canonical:
// the same checkpoint always produces the same bytes.
std::string checkpoint_json(const Checkpoint& ckpt);
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// One JSON object per line, one line per epoch.
void write_metrics_jsonl(const TrainHistory& history, const std::string& path);

// Dataset locator syntax used by the command-line tools:
//   csv:PATH:LABELCOL
//   idx:IMAGES_PATH:LABELS_PATH
//   blobs:CLASSES,DIM,PER_CLASS,SCALE,SIGMA,SEED
// Malformed locators throw std::invalid_argument.
Dataset load_dataset_spec(const std::string& spec);

}  // namespace hybuse

#include "hybuse/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "hybuse/errors.hpp"
#include "hybuse/kernels.hpp"
#include "hybuse/rng.hpp"

namespace hybuse {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s, const std::string& context) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw parse_error(context + ": expected a number, got '" +
                      std::string(s) + "'");
  }
  return value;
}

long parse_long(std::string_view s, const std::string& context) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw parse_error(context + ": expected an integer, got '" +
                      std::string(s) + "'");
  }
  return value;
}

std::string location(const std::string& path, std::size_t line_number) {
  return path + ":" + std::to_string(line_number);
}

}  // namespace

Dataset load_csv(const std::string& path, int label_column) {
  if (label_column < 0) {
    throw std::invalid_argument("load_csv: label column must be >= 0");
  }
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");

  Dataset data;
  data.name = path;
  std::string line;
  std::size_t line_number = 0;
  std::size_t columns = 0;
  int max_label = -1;

  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    if (columns == 0) {
      columns = fields.size();
      if (columns < 2) {
        throw parse_error(location(path, line_number) +
                          ": need at least one feature and a label column");
      }
      if (static_cast<std::size_t>(label_column) >= columns) {
        throw parse_error(location(path, line_number) + ": label column " +
                          std::to_string(label_column) + " out of range for " +
                          std::to_string(columns) + " columns");
      }
      data.input_dim = columns - 1;
    } else if (fields.size() != columns) {
      throw parse_error(location(path, line_number) + ": expected " +
                        std::to_string(columns) + " fields, got " +
                        std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < columns; ++c) {
      const double v = parse_double(fields[c], location(path, line_number));
      if (c == static_cast<std::size_t>(label_column)) {
        if (!(v >= 0.0) || v != std::floor(v) || v > 2147483647.0) {
          throw parse_error(location(path, line_number) +
                            ": label must be a non-negative integer, got '" +
                            std::string(fields[c]) + "'");
        }
        const int label = static_cast<int>(v);
        data.labels.push_back(label);
        max_label = std::max(max_label, label);
      } else {
        data.features.push_back(v);
      }
    }
  }
  if (data.labels.empty()) {
    throw parse_error(path + ": no data rows");
  }
  data.class_count = max_label + 1;

  std::vector<bool> seen(static_cast<std::size_t>(data.class_count), false);
  for (const int l : data.labels) seen[static_cast<std::size_t>(l)] = true;
  for (int c = 0; c < data.class_count; ++c) {
    if (!seen[static_cast<std::size_t>(c)]) {
      std::cerr << "warning: " << path << ": class " << c
                << " has no examples\n";
    }
  }
  return data;
}

namespace {

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw format_error(path + ": truncated header");
  }
  return (static_cast<std::uint32_t>(bytes[0]) << 24) |
         (static_cast<std::uint32_t>(bytes[1]) << 16) |
         (static_cast<std::uint32_t>(bytes[2]) << 8) |
         static_cast<std::uint32_t>(bytes[3]);
}

}  // namespace

Dataset load_idx(const std::string& images_path,
                 const std::string& labels_path) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) throw io_error("cannot open '" + images_path + "'");
  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw io_error("cannot open '" + labels_path + "'");

  const std::uint32_t image_magic = read_u32_be(images, images_path);
  if (image_magic != 0x00000803u) {
    throw format_error(images_path +
                       ": bad magic (expected unsigned-byte rank-3 images)");
  }
  const std::uint32_t n = read_u32_be(images, images_path);
  const std::uint32_t rows = read_u32_be(images, images_path);
  const std::uint32_t cols = read_u32_be(images, images_path);

  const std::uint32_t label_magic = read_u32_be(labels, labels_path);
  if (label_magic != 0x00000801u) {
    throw format_error(labels_path +
                       ": bad magic (expected unsigned-byte rank-1 labels)");
  }
  const std::uint32_t n_labels = read_u32_be(labels, labels_path);
  if (n != n_labels) {
    throw format_error("image/label count mismatch: " + std::to_string(n) +
                       " images vs " + std::to_string(n_labels) + " labels");
  }
  if (n == 0) throw format_error(images_path + ": empty image set");
  if (rows == 0 || cols == 0) {
    throw format_error(images_path + ": zero image dimensions");
  }

  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  std::vector<unsigned char> buffer(pixels);
  Dataset data;
  data.name = images_path;
  data.input_dim = pixels;
  data.features.reserve(static_cast<std::size_t>(n) * pixels);
  int max_label = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!images.read(reinterpret_cast<char*>(buffer.data()),
                     static_cast<std::streamsize>(pixels))) {
      throw format_error(images_path + ": truncated at image " +
                         std::to_string(i));
    }
    for (const unsigned char px : buffer) {
      data.features.push_back(static_cast<double>(px) / 255.0);
    }
    char label_byte = 0;
    if (!labels.get(label_byte)) {
      throw format_error(labels_path + ": truncated at label " +
                         std::to_string(i));
    }
    const int label = static_cast<unsigned char>(label_byte);
    data.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  data.class_count = max_label + 1;
  return data;
}

Dataset synthetic_blobs(int classes, int input_dim, int per_class,
                        double center_scale, double noise_sigma,
                        std::uint64_t seed, BlobsReport* report) {
  if (classes < 2) {
    throw std::invalid_argument("synthetic_blobs: need at least two classes");
  }
  if (input_dim < 1) {
    throw std::invalid_argument("synthetic_blobs: input_dim must be >= 1");
  }
  if (per_class < 1) {
    throw std::invalid_argument("synthetic_blobs: per_class must be >= 1");
  }
  if (!(center_scale > 0.0) || !std::isfinite(center_scale)) {
    throw std::invalid_argument(
        "synthetic_blobs: center scale must be finite and > 0");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw std::invalid_argument(
        "synthetic_blobs: noise sigma must be finite and >= 0");
  }

  const std::size_t dim = static_cast<std::size_t>(input_dim);
  Rng rng(seed);
  std::vector<std::vector<double>> centers;
  centers.reserve(static_cast<std::size_t>(classes));

  if (classes <= input_dim) {
    // Random orthonormal frame (Gram-Schmidt on Gaussian draws): centers are
    // mutually orthogonal, so every pair sits center_scale * sqrt(2) apart.
    for (int c = 0; c < classes; ++c) {
      std::vector<double> v(dim);
      while (true) {
        for (auto& x : v) x = rng.normal();
        for (const auto& prev : centers) {
          const double proj = kernels::dot(v.data(), prev.data(), dim);
          kernels::axpy(-proj, prev.data(), v.data(), dim);
        }
        const double norm =
            std::sqrt(kernels::squared_norm(v.data(), dim));
        if (norm > 1e-8) {
          kernels::scale(1.0 / norm, v.data(), dim);
          break;
        }
      }
      centers.push_back(v);
    }
  } else {
    for (int c = 0; c < classes; ++c) centers.push_back(rng.unit_vector(dim));
  }
  for (auto& c : centers) kernels::scale(center_scale, c.data(), dim);

  Dataset data;
  data.input_dim = dim;
  data.class_count = classes;
  {
    std::ostringstream name;
    name << "blobs:" << classes << "," << input_dim << "," << per_class << ","
         << center_scale << "," << noise_sigma << "," << seed;
    data.name = name.str();
  }
  data.features.reserve(static_cast<std::size_t>(classes) * per_class * dim);
  data.labels.reserve(static_cast<std::size_t>(classes) * per_class);
  for (int c = 0; c < classes; ++c) {
    for (int k = 0; k < per_class; ++k) {
      for (std::size_t j = 0; j < dim; ++j) {
        data.features.push_back(centers[static_cast<std::size_t>(c)][j] +
                                noise_sigma * rng.normal());
      }
      data.labels.push_back(c);
    }
  }

  if (report) {
    double min_d = std::numeric_limits<double>::infinity();
    double sum_d = 0.0;
    std::size_t pairs = 0;
    for (int i = 0; i < classes; ++i) {
      for (int j = i + 1; j < classes; ++j) {
        const double d = std::sqrt(kernels::squared_distance(
            centers[static_cast<std::size_t>(i)].data(),
            centers[static_cast<std::size_t>(j)].data(), dim));
        min_d = std::min(min_d, d);
        sum_d += d;
        ++pairs;
      }
    }
    report->min_center_distance = min_d;
    report->mean_center_distance = sum_d / static_cast<double>(pairs);
  }
  return data;
}

namespace {

Dataset take_rows(const Dataset& src, const std::vector<std::size_t>& rows,
                  const std::string& suffix) {
  Dataset out;
  out.input_dim = src.input_dim;
  out.class_count = src.class_count;
  out.name = src.name + suffix;
  out.features.reserve(rows.size() * src.input_dim);
  out.labels.reserve(rows.size());
  for (const std::size_t r : rows) {
    const double* p = src.row(r);
    out.features.insert(out.features.end(), p, p + src.input_dim);
    out.labels.push_back(src.labels[r]);
  }
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
  if (!(spec.validation_fraction > 0.0) ||
      !(spec.validation_fraction < 1.0)) {
    throw std::invalid_argument("split: validation fraction outside (0, 1)");
  }
  if (data.size() < 2) {
    throw std::invalid_argument("split: need at least two examples");
  }

  Rng rng(spec.seed);
  std::vector<std::size_t> val_rows;
  std::vector<std::size_t> train_rows;

  if (spec.stratified) {
    std::vector<std::vector<std::size_t>> buckets(
        static_cast<std::size_t>(data.class_count));
    for (std::size_t i = 0; i < data.size(); ++i) {
      buckets[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }
    for (auto& bucket : buckets) {
      rng.shuffle(bucket);
      const std::size_t k = static_cast<std::size_t>(std::llround(
          spec.validation_fraction * static_cast<double>(bucket.size())));
      val_rows.insert(val_rows.end(), bucket.begin(), bucket.begin() + k);
      train_rows.insert(train_rows.end(), bucket.begin() + k, bucket.end());
    }
  } else {
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::size_t k = static_cast<std::size_t>(std::llround(
        spec.validation_fraction * static_cast<double>(order.size())));
    val_rows.assign(order.begin(), order.begin() + k);
    train_rows.assign(order.begin() + k, order.end());
  }

  if (val_rows.empty() || train_rows.empty()) {
    throw std::invalid_argument("split: a side of the split is empty");
  }
  std::sort(val_rows.begin(), val_rows.end());
  std::sort(train_rows.begin(), train_rows.end());
  return {take_rows(data, train_rows, ":train"),
          take_rows(data, val_rows, ":val")};
}

Standardization fit_standardization(const Dataset& data) {
  if (data.size() == 0) {
    throw std::invalid_argument("fit_standardization: empty dataset");
  }
  const std::size_t dim = data.input_dim;
  Standardization s;
  s.mean.assign(dim, 0.0);
  s.stddev.assign(dim, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    kernels::axpy(1.0, data.row(i), s.mean.data(), dim);
  }
  kernels::scale(1.0 / static_cast<double>(data.size()), s.mean.data(), dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double* row = data.row(i);
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = row[j] - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    s.stddev[j] = std::max(
        std::sqrt(s.stddev[j] / static_cast<double>(data.size())), 1e-12);
  }
  return s;
}

void apply_standardization(Dataset& data, const Standardization& s) {
  if (s.mean.size() != data.input_dim || s.stddev.size() != data.input_dim) {
    throw std::invalid_argument(
        "apply_standardization: dimension mismatch");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    double* row = data.features.data() + i * data.input_dim;
    for (std::size_t j = 0; j < data.input_dim; ++j) {
      row[j] = (row[j] - s.mean[j]) / s.stddev[j];
    }
  }
}

void save_prototypes_csv(const PrototypeSet& set, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw io_error("cannot open '" + path + "' for writing");
  char buf[64];
  for (const IdealPrototype& proto : set.prototypes) {
    std::fprintf(f, "%d", proto.label);
    for (const double v : proto.point.coords()) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::fprintf(f, ",%s", buf);
    }
    std::fputc('\n', f);
  }
  if (std::fclose(f) != 0) throw io_error("error writing '" + path + "'");
}

PrototypeSet load_prototypes_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "'");
  std::vector<IdealPrototype> protos;
  std::string line;
  std::size_t line_number = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() < 3) {
      throw parse_error(location(path, line_number) +
                        ": prototype rows need a label and at least two "
                        "coordinates");
    }
    if (dim == 0) {
      dim = fields.size() - 1;
    } else if (fields.size() - 1 != dim) {
      throw parse_error(location(path, line_number) +
                        ": inconsistent coordinate count");
    }
    const long label = parse_long(fields[0], location(path, line_number));
    if (label < 0 || label > 2147483647) {
      throw parse_error(location(path, line_number) + ": bad label");
    }
    std::vector<double> coords;
    coords.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      coords.push_back(parse_double(fields[i], location(path, line_number)));
    }
    try {
      protos.push_back(
          {IdealPoint::from_unit(std::move(coords)), static_cast<int>(label)});
    } catch (const std::invalid_argument& e) {
      throw parse_error(location(path, line_number) + ": " + e.what());
    }
  }
  if (protos.empty()) throw parse_error(path + ": no prototype rows");
  try {
    return make_prototype_set(std::move(protos),
                              PrototypePlacement::external_projected);
  } catch (const std::invalid_argument& e) {
    throw parse_error(path + ": " + e.what());
  }
}

namespace {

ordered_json json_double(double v) {
  // nlohmann serializes non-finite doubles as null; make that explicit.
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double double_or_nan(const ordered_json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return v.get<double>();
}

const char* activation_name(Activation a) {
  return a == Activation::relu ? "relu" : "identity";
}

Activation activation_from(const std::string& name, const std::string& path) {
  if (name == "relu") return Activation::relu;
  if (name == "identity") return Activation::identity;
  throw format_error(path + ": unknown activation '" + name + "'");
}

}  // namespace

std::string checkpoint_json(const Checkpoint& ckpt) {
  ordered_json j;
  j["schema_version"] = 1;
  j["input_dim"] = ckpt.model.input_dim();
  j["output_dim"] = ckpt.model.output_dim();
  j["layers"] = ordered_json::array();
  for (const Layer& layer : ckpt.model.layers) {
    ordered_json jl;
    jl["weights"] = layer.weights.data;  // row-major
    jl["biases"] = layer.biases;
    jl["activation"] = activation_name(layer.activation);
    j["layers"].push_back(std::move(jl));
  }
  j["penalty_slope"] = ckpt.penalty_slope;
  j["prototype_file_reference"] = ckpt.prototype_file_reference;
  if (ckpt.standardization) {
    j["standardization"] = {{"mean", ckpt.standardization->mean},
                            {"stddev", ckpt.standardization->stddev}};
  } else {
    j["standardization"] = nullptr;
  }
  j["training_config"] = {
      {"learning_rate", ckpt.training_config.learning_rate},
      {"weight_decay", ckpt.training_config.weight_decay},
      {"batch_size", ckpt.training_config.batch_size},
      {"epochs", ckpt.training_config.epochs},
      {"penalty_slope", ckpt.training_config.penalty_slope},
      {"lr_decay_epochs", ckpt.training_config.lr_decay_epochs},
      {"lr_decay_factor", ckpt.training_config.lr_decay_factor},
      {"seed", ckpt.training_config.seed},
  };
  j["final_metrics"] = {
      {"mean_loss", json_double(ckpt.final_metrics.mean_loss)},
      {"val_accuracy", json_double(ckpt.final_metrics.val_accuracy)},
      {"epochs_run", ckpt.final_metrics.epochs_run},
  };
  return j.dump(2) + "\n";
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << checkpoint_json(ckpt);
  if (!out) throw io_error("error writing '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(path + ": invalid JSON: " + e.what());
  }

  try {
    if (j.at("schema_version").get<int>() != 1) {
      throw format_error(path + ": unsupported schema_version");
    }
    Checkpoint ckpt;
    const std::size_t input_dim = j.at("input_dim").get<std::size_t>();
    const std::size_t output_dim = j.at("output_dim").get<std::size_t>();
    std::size_t prev = input_dim;
    for (const auto& jl : j.at("layers")) {
      Layer layer;
      layer.biases = jl.at("biases").get<std::vector<double>>();
      const auto weights = jl.at("weights").get<std::vector<double>>();
      if (layer.biases.empty() || weights.size() % layer.biases.size() != 0) {
        throw format_error(path + ": layer weight/bias shapes inconsistent");
      }
      layer.weights.rows = layer.biases.size();
      layer.weights.cols = weights.size() / layer.biases.size();
      layer.weights.data = weights;
      if (layer.weights.cols != prev) {
        throw format_error(path + ": layer input width does not chain");
      }
      prev = layer.weights.rows;
      layer.activation =
          activation_from(jl.at("activation").get<std::string>(), path);
      ckpt.model.layers.push_back(std::move(layer));
    }
    if (ckpt.model.layers.empty()) {
      throw format_error(path + ": checkpoint has no layers");
    }
    if (prev != output_dim || ckpt.model.input_dim() != input_dim) {
      throw format_error(path + ": declared dimensions do not match layers");
    }

    ckpt.penalty_slope = j.at("penalty_slope").get<double>();
    ckpt.prototype_file_reference =
        j.at("prototype_file_reference").get<std::string>();
    if (!j.at("standardization").is_null()) {
      Standardization s;
      s.mean = j["standardization"].at("mean").get<std::vector<double>>();
      s.stddev = j["standardization"].at("stddev").get<std::vector<double>>();
      if (s.mean.size() != input_dim || s.stddev.size() != input_dim) {
        throw format_error(path + ": standardization dimension mismatch");
      }
      ckpt.standardization = std::move(s);
    }

    const auto& tc = j.at("training_config");
    ckpt.training_config.learning_rate = tc.at("learning_rate").get<double>();
    ckpt.training_config.weight_decay = tc.at("weight_decay").get<double>();
    ckpt.training_config.batch_size = tc.at("batch_size").get<int>();
    ckpt.training_config.epochs = tc.at("epochs").get<int>();
    ckpt.training_config.penalty_slope = tc.at("penalty_slope").get<double>();
    ckpt.training_config.lr_decay_epochs =
        tc.at("lr_decay_epochs").get<std::vector<int>>();
    ckpt.training_config.lr_decay_factor =
        tc.at("lr_decay_factor").get<double>();
    ckpt.training_config.seed = tc.at("seed").get<std::uint64_t>();

    const auto& fm = j.at("final_metrics");
    ckpt.final_metrics.mean_loss = double_or_nan(fm, "mean_loss");
    ckpt.final_metrics.val_accuracy = double_or_nan(fm, "val_accuracy");
    ckpt.final_metrics.epochs_run = fm.at("epochs_run").get<int>();
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw format_error(path + ": malformed checkpoint: " + e.what());
  }
}

void write_metrics_jsonl(const TrainHistory& history,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  for (const EpochStats& e : history) {
    ordered_json j;
    j["epoch"] = e.epoch;
    j["mean_loss"] = json_double(e.mean_loss);
    j["val_accuracy"] = json_double(e.val_accuracy);
    j["lr"] = json_double(e.learning_rate);
    out << j.dump() << "\n";
  }
  if (!out) throw io_error("error writing '" + path + "'");
}

Dataset load_dataset_spec(const std::string& spec) {
  const auto bad = [&spec](const std::string& why) {
    return std::invalid_argument("dataset locator '" + spec + "': " + why);
  };

  if (spec.rfind("csv:", 0) == 0) {
    const std::string rest = spec.substr(4);
    const std::size_t pos = rest.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == rest.size()) {
      throw bad("expected csv:PATH:LABELCOL");
    }
    long col = 0;
    try {
      col = parse_long(rest.substr(pos + 1), "label column");
    } catch (const parse_error&) {
      throw bad("label column is not an integer");
    }
    if (col < 0) throw bad("label column must be >= 0");
    return load_csv(rest.substr(0, pos), static_cast<int>(col));
  }

  if (spec.rfind("idx:", 0) == 0) {
    const std::string rest = spec.substr(4);
    const std::size_t pos = rest.rfind(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == rest.size()) {
      throw bad("expected idx:IMAGES_PATH:LABELS_PATH");
    }
    return load_idx(rest.substr(0, pos), rest.substr(pos + 1));
  }

  if (spec.rfind("blobs:", 0) == 0) {
    const auto fields = split_fields(std::string_view(spec).substr(6), ',');
    if (fields.size() != 6) {
      throw bad("expected blobs:CLASSES,DIM,PER_CLASS,SCALE,SIGMA,SEED");
    }
    try {
      const long classes = parse_long(fields[0], "blobs classes");
      const long dim = parse_long(fields[1], "blobs dim");
      const long per_class = parse_long(fields[2], "blobs per-class count");
      const double scale = parse_double(fields[3], "blobs scale");
      const double sigma = parse_double(fields[4], "blobs sigma");
      const long seed = parse_long(fields[5], "blobs seed");
      if (seed < 0) throw bad("blobs seed must be >= 0");
      return synthetic_blobs(static_cast<int>(classes), static_cast<int>(dim),
                             static_cast<int>(per_class), scale, sigma,
                             static_cast<std::uint64_t>(seed));
    } catch (const parse_error& e) {
      throw bad(e.what());
    }
  }

  throw bad("unknown scheme (expected csv:, idx:, or blobs:)");
}

}  // namespace hybuse

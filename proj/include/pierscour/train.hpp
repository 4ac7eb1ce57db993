#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pierscour/data.hpp"
#include "pierscour/init.hpp"
#include "pierscour/metrics.hpp"
#include "pierscour/nn.hpp"
#include "pierscour/optim.hpp"

namespace pierscour {

using UpdaterConfig = std::variant<AdamConfig, MomentumConfig>;

enum class LossKind { mse };

// How `epochs` is counted: full passes over the data, or single updater
// steps (training then stops mid-epoch when the budget runs out).
enum class IterationUnit { epoch, update };

std::string_view to_string(IterationUnit unit);
IterationUnit parse_iteration_unit(std::string_view name);

struct TrainConfig {
  std::vector<LayerSpec> layers;
  InitScheme init;
  UpdaterConfig updater = AdamConfig{};
  std::optional<std::size_t> batch_size;  // empty: full batch
  std::size_t epochs = 1;
  IterationUnit iteration_unit = IterationUnit::epoch;
  LossKind loss = LossKind::mse;
  std::uint64_t seed = 42;
  bool shuffle_each_epoch = true;
  std::size_t history_interval = 100;

  // Throws ConfigError.
  void validate() const;
};

enum class Preset { dnn_paper, bpnn_paper };

std::string_view to_string(Preset p);
Preset parse_preset(std::string_view name);

// 7 -> hidden... -> 1, identity output.
std::vector<LayerSpec> mlp_layers(std::span<const std::size_t> hidden,
                                  Activation hidden_activation,
                                  double dropout_rate = 0.0,
                                  std::size_t inputs = kFeatureCount);

// dnn_paper: 100/80/50 relu, Xavier, Adam defaults, batch 5, 15000 epochs.
// bpnn_paper: 8 sigmoid, uniform(+-0.5), momentum 0.2/0.1, full batch,
// 1500 epochs.
TrainConfig preset_config(Preset p);

struct HistoryEntry {
  std::size_t epoch = 0;
  double train_loss = 0.0;  // MSE in standardized target units
  std::optional<double> val_rmse_m;
};

struct TrainHistory {
  std::vector<HistoryEntry> entries;
  std::uint64_t updater_steps = 0;
  std::size_t epochs_run = 0;
};

struct Model {
  std::vector<LayerSpec> layers;
  NetworkParams params;
  Standardizer standardizer;
};

struct TrainResult {
  Model model;
  TrainHistory history;
};

// Updater steps that `train` will take for n training records.
std::uint64_t planned_steps(const TrainConfig& cfg, std::size_t n_train);

// Parameters `train` starts from for this config.
NetworkParams initial_params(const TrainConfig& cfg);

TrainResult train(const TrainConfig& cfg, const Dataset& train_set,
                  const Dataset* validation_set = nullptr);

struct Prediction {
  double actual_m = 0.0;
  double predicted_m = 0.0;
};

struct Evaluation {
  MetricsReport metrics;
  std::vector<Prediction> predictions;  // test-set order
};

std::vector<double> predict_meters(const Model& model, const Dataset& ds);
Evaluation evaluate(const Model& model, const Dataset& test_set);

void write_predictions_csv(const Evaluation& ev, std::ostream& out);
void write_predictions_csv(const Evaluation& ev,
                           const std::filesystem::path& path);
void write_history_csv(const TrainHistory& h, std::ostream& out);
void write_history_csv(const TrainHistory& h, const std::filesystem::path& path);

// Versioned text model file; every double round-trips bit-exactly.
void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(std::istream& in, std::string_view source = "<stream>");
Model load_model(const std::filesystem::path& path);

struct GradientCheckOptions {
  std::vector<std::size_t> widths = {7, 5, 3, 1};
  Activation hidden_activation = Activation::sigmoid;
  std::size_t batch = 4;
  std::uint64_t seed = 7;
  double step = 1e-6;
  // relu only: minimum |pre-activation| required at the checked point.
  double kink_margin = 1e-4;
  // Test hook: perturbs one analytic partial before comparison.
  bool corrupt_backward = false;
};

struct GradientCheckReport {
  double max_relative_error = 0.0;
  // Largest |analytic - numeric| among partials whose magnitude is < 1e-6.
  double max_small_abs_error = 0.0;
  std::vector<double> layer_max_relative_error;
  std::size_t parameters_checked = 0;
  std::uint64_t seed_used = 0;
  bool passed = false;
};

inline constexpr double kGradientRelTolerance = 1e-5;
inline constexpr double kGradientAbsTolerance = 1e-8;

GradientCheckReport gradient_check(const GradientCheckOptions& opts);

}  // namespace pierscour

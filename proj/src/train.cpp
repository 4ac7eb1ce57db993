#include "pierscour/train.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include "pierscour/error.hpp"
#include "pierscour/rng.hpp"

namespace pierscour {

namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kDropoutStream = 2;

}  // namespace

std::string_view to_string(IterationUnit unit) {
  return unit == IterationUnit::epoch ? "epoch" : "update";
}

IterationUnit parse_iteration_unit(std::string_view name) {
  if (name == "epoch") return IterationUnit::epoch;
  if (name == "update") return IterationUnit::update;
  throw ConfigError("unknown iteration unit '" + std::string(name) +
                    "' (expected epoch or update)");
}

std::string_view to_string(Preset p) {
  return p == Preset::dnn_paper ? "dnn_paper" : "bpnn_paper";
}

Preset parse_preset(std::string_view name) {
  if (name == "dnn_paper") return Preset::dnn_paper;
  if (name == "bpnn_paper") return Preset::bpnn_paper;
  throw ConfigError("unknown preset '" + std::string(name) +
                    "' (expected dnn_paper or bpnn_paper)");
}

void TrainConfig::validate() const {
  validate_topology(layers);
  if (layers.front().input_width != kFeatureCount) {
    throw ConfigError("first layer input width must be " +
                      std::to_string(kFeatureCount) + ", got " +
                      std::to_string(layers.front().input_width));
  }
  if (layers.back().output_width != 1)
    throw ConfigError("last layer output width must be 1");
  init.validate();
  std::visit([](const auto& u) { u.validate(); }, updater);
  if (batch_size && *batch_size == 0)
    throw ConfigError("batch size must be >= 1");
  if (epochs == 0) throw ConfigError("epochs must be >= 1");
  if (history_interval == 0) throw ConfigError("history interval must be >= 1");
}

std::vector<LayerSpec> mlp_layers(std::span<const std::size_t> hidden,
                                  Activation hidden_activation,
                                  double dropout_rate, std::size_t inputs) {
  std::vector<LayerSpec> layers;
  std::size_t width = inputs;
  for (std::size_t h : hidden) {
    layers.push_back({width, h, hidden_activation, dropout_rate});
    width = h;
  }
  layers.push_back({width, 1, Activation::identity, 0.0});
  return layers;
}

TrainConfig preset_config(Preset p) {
  TrainConfig cfg;
  if (p == Preset::dnn_paper) {
    const std::size_t hidden[] = {100, 80, 50};
    cfg.layers = mlp_layers(hidden, Activation::relu);
    cfg.init = InitScheme::xavier();
    cfg.updater = AdamConfig{};
    cfg.batch_size = 5;
    cfg.epochs = 15000;
  } else {
    const std::size_t hidden[] = {8};
    cfg.layers = mlp_layers(hidden, Activation::sigmoid);
    cfg.init = InitScheme::uniform(0.5);
    cfg.updater = MomentumConfig{0.2, 0.1};
    cfg.batch_size = std::nullopt;
    cfg.epochs = 1500;
  }
  return cfg;
}

std::uint64_t planned_steps(const TrainConfig& cfg, std::size_t n_train) {
  if (n_train == 0) return 0;
  if (cfg.iteration_unit == IterationUnit::update) return cfg.epochs;
  const std::size_t batch = std::min(cfg.batch_size.value_or(n_train), n_train);
  const std::uint64_t per_epoch = (n_train + batch - 1) / batch;
  return per_epoch * cfg.epochs;
}

NetworkParams initial_params(const TrainConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, kInitStream));
  return init_network(cfg.init, cfg.layers, rng);
}

namespace {

std::vector<ParamBlock> make_blocks(NetworkParams& params, const Gradients& grads) {
  std::vector<ParamBlock> blocks;
  blocks.reserve(2 * params.layers.size());
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    const std::string layer = "layer " + std::to_string(k);
    blocks.push_back({params.layers[k].weights.data(), grads[k].weights.data(),
                      layer + " weights"});
    blocks.push_back({params.layers[k].biases.data(), grads[k].biases.data(),
                      layer + " biases"});
  }
  return blocks;
}

double mse(const Matrix& pred, const Matrix& target) {
  double s = 0.0;
  auto p = pred.data();
  auto t = target.data();
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
  return s / static_cast<double>(p.size());
}

Matrix gather_rows(const Matrix& src, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), src.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto from = src.row(rows[i]);
    std::copy(from.begin(), from.end(), out.row(i).begin());
  }
  return out;
}

class Updater {
 public:
  Updater(const UpdaterConfig& cfg, std::span<const ParamBlock> blocks)
      : cfg_(cfg) {
    if (std::holds_alternative<AdamConfig>(cfg))
      state_ = AdamState::for_blocks(blocks);
    else
      state_ = MomentumState::for_blocks(blocks);
  }

  void step(std::span<const ParamBlock> blocks) {
    if (auto* adam = std::get_if<AdamConfig>(&cfg_))
      adam_step(blocks, std::get<AdamState>(state_), *adam);
    else
      momentum_step(blocks, std::get<MomentumState>(state_),
                    std::get<MomentumConfig>(cfg_));
  }

 private:
  UpdaterConfig cfg_;
  std::variant<AdamState, MomentumState> state_;
};

}  // namespace

TrainResult train(const TrainConfig& cfg, const Dataset& train_set,
                  const Dataset* validation_set) {
  cfg.validate();
  if (train_set.empty()) throw DomainError("training set is empty");

  TrainResult result{{cfg.layers, initial_params(cfg), Standardizer::fit(train_set)}, {}};
  Model& model = result.model;
  TrainHistory& history = result.history;

  const Matrix x = model.standardizer.features(train_set);
  const Matrix y = model.standardizer.targets(train_set);
  const std::size_t n = train_set.size();
  const std::size_t batch = std::min(cfg.batch_size.value_or(n), n);
  const std::uint64_t budget = planned_steps(cfg, n);

  Rng shuffle_rng(derive_seed(cfg.seed, kShuffleStream));
  Rng dropout_rng(derive_seed(cfg.seed, kDropoutStream));

  std::optional<Updater> updater;
  std::vector<std::size_t> order(n);

  auto record = [&](std::size_t epoch) {
    HistoryEntry e;
    e.epoch = epoch;
    e.train_loss = mse(predict(model.params, model.layers, x), y);
    if (validation_set != nullptr && !validation_set->empty()) {
      auto pred = predict_meters(model, *validation_set);
      std::vector<double> actual;
      actual.reserve(validation_set->size());
      for (const auto& r : validation_set->records) actual.push_back(r.scour);
      e.val_rmse_m = rmse(actual, pred);
    }
    history.entries.push_back(e);
  };

  for (std::size_t epoch = 1; history.updater_steps < budget; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (cfg.shuffle_each_epoch) shuffle(std::span<std::size_t>(order), shuffle_rng);

    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n && history.updater_steps < budget;
         start += batch, ++batch_index) {
      const std::size_t len = std::min(batch, n - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      const Matrix xb = gather_rows(x, rows);
      const Matrix yb = gather_rows(y, rows);

      const ForwardTrace trace =
          forward(model.params, model.layers, xb, Mode::train, &dropout_rng);
      const Matrix& pred = trace.output();
      Matrix grad_out = elementwise(ElementwiseOp::sub, pred, yb);
      const double loss = mse(pred, yb);
      if (!std::isfinite(loss)) {
        throw DivergenceError("training diverged: non-finite loss at epoch " +
                              std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index));
      }
      const double scale = 2.0 / static_cast<double>(len);
      for (double& g : grad_out.data()) g *= scale;

      const Gradients grads = backward(model.params, trace, grad_out);
      const auto blocks = make_blocks(model.params, grads);
      if (!updater) updater.emplace(cfg.updater, blocks);
      try {
        updater->step(blocks);
      } catch (const NumericError& e) {
        throw DivergenceError(std::string(e.what()) + " at epoch " +
                              std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index));
      }
      ++history.updater_steps;
    }
    history.epochs_run = epoch;
    if (epoch % cfg.history_interval == 0 || history.updater_steps >= budget)
      record(epoch);
  }
  return result;
}

std::vector<double> predict_meters(const Model& model, const Dataset& ds) {
  const Matrix out =
      predict(model.params, model.layers, model.standardizer.features(ds));
  std::vector<double> meters(out.rows());
  for (std::size_t i = 0; i < out.rows(); ++i)
    meters[i] = model.standardizer.target_to_meters(out(i, 0));
  return meters;
}

Evaluation evaluate(const Model& model, const Dataset& test_set) {
  if (test_set.empty()) throw DomainError("evaluate: empty test set");
  if (model.layers.empty() || model.layers.front().input_width != kFeatureCount)
    throw ConfigError("model input width must be " + std::to_string(kFeatureCount));
  const auto predicted = predict_meters(model, test_set);
  std::vector<double> actual;
  actual.reserve(test_set.size());
  for (const auto& r : test_set.records) actual.push_back(r.scour);

  Evaluation ev;
  ev.metrics.rmse = rmse(actual, predicted);
  ev.metrics.mae = mae(actual, predicted);
  ev.metrics.n = actual.size();
  // A degenerate model (constant output) or a single record still gets its
  // error metrics; only the correlation is left undefined.
  try {
    ev.metrics.cc = correlation(actual, predicted);
  } catch (const UndefinedCorrelationError&) {
    ev.metrics.cc = std::numeric_limits<double>::quiet_NaN();
  } catch (const DomainError&) {
    ev.metrics.cc = std::numeric_limits<double>::quiet_NaN();
  }
  ev.predictions.reserve(actual.size());
  for (std::size_t i = 0; i < actual.size(); ++i)
    ev.predictions.push_back({actual[i], predicted[i]});
  return ev;
}

namespace {

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_predictions_csv(const Evaluation& ev, std::ostream& out) {
  out << "index,actual_m,predicted_m\n";
  for (std::size_t i = 0; i < ev.predictions.size(); ++i) {
    out << i << ',' << format_double(ev.predictions[i].actual_m) << ','
        << format_double(ev.predictions[i].predicted_m) << '\n';
  }
}

void write_predictions_csv(const Evaluation& ev,
                           const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_predictions_csv(ev, out); });
}

void write_history_csv(const TrainHistory& h, std::ostream& out) {
  out << "epoch,train_loss,val_rmse_m\n";
  for (const auto& e : h.entries) {
    out << e.epoch << ',' << format_double(e.train_loss) << ',';
    if (e.val_rmse_m) out << format_double(*e.val_rmse_m);
    out << '\n';
  }
}

void write_history_csv(const TrainHistory& h, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& out) { write_history_csv(h, out); });
}

}  // namespace pierscour

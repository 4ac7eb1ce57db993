// pierscour command-line tool. Talks to the library only through the C API.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pierscour/pierscour.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;
constexpr int kExitDivergence = 3;

constexpr std::uint64_t kFallbackSeed = 42;
constexpr const char* kSeedEnv = "PIERSCOUR_SEED";

struct Failure {
  ps_status status;
  std::string message;
};

int exit_code(ps_status st) {
  switch (st) {
    case PS_OK: return kExitOk;
    case PS_ERR_IO: return kExitIo;
    case PS_ERR_DIVERGENCE:
    case PS_ERR_NUMERIC: return kExitDivergence;
    default: return kExitInvalid;
  }
}

void check(ps_status st) {
  if (st != PS_OK) throw Failure{st, ps_last_error()};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};

using Dataset = std::unique_ptr<ps_dataset, Deleter<ps_dataset, ps_dataset_free>>;
using Config = std::unique_ptr<ps_config, Deleter<ps_config, ps_config_free>>;
using Model = std::unique_ptr<ps_model, Deleter<ps_model, ps_model_free>>;
using History = std::unique_ptr<ps_history, Deleter<ps_history, ps_history_free>>;
using Evaluation =
    std::unique_ptr<ps_evaluation, Deleter<ps_evaluation, ps_evaluation_free>>;

Dataset load(const std::string& path) {
  ps_dataset* ds = nullptr;
  check(ps_dataset_load_csv(path.c_str(), &ds));
  return Dataset(ds);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0') return v;
    throw Failure{PS_ERR_CONFIG, std::string(kSeedEnv) + " is not an unsigned integer"};
  }
  return kFallbackSeed;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_fixed(double x, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

std::string fmt_exact(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

// Flat key=value manifest, one per artifact-producing run.
class Manifest {
 public:
  explicit Manifest(std::string command) : started_(utc_now()) {
    add("command", std::move(command));
    add("library_version", ps_version());
    add("started_utc", started_);
  }

  void add(const std::string& key, const std::string& value) {
    lines_.push_back(key + "=" + value);
  }

  void add_config(const std::string& prefix, const ps_config* cfg) {
    size_t needed = 0;
    ps_config_describe(cfg, nullptr, 0, &needed);
    std::string text(needed, '\0');
    check(ps_config_describe(cfg, text.data(), text.size(), &needed));
    text.resize(needed - 1);
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) lines_.push_back(prefix + line);
  }

  void write(const fs::path& path) {
    add("finished_utc", utc_now());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{PS_ERR_IO, "cannot open '" + path.string() + "' for writing"};
    for (const auto& l : lines_) out << l << '\n';
    if (!out.flush()) throw Failure{PS_ERR_IO, "failed writing '" + path.string() + "'"};
  }

 private:
  std::string started_;
  std::vector<std::string> lines_;
};

enum class Format { human, json_lines };

struct Globals {
  Format format = Format::human;
};

void emit_metrics_table(const Globals& g,
                        const std::vector<std::pair<std::string, ps_metrics>>& rows) {
  if (g.format == Format::json_lines) {
    for (const auto& [name, m] : rows) {
      json j = {{"record", "metrics"}, {"model", name}, {"cc", std::isfinite(m.cc) ? json(m.cc) : json(nullptr)},
                {"rmse_m", m.rmse_m}, {"mae_m", m.mae_m}, {"n", m.n}};
      std::cout << j.dump() << '\n';
    }
    return;
  }
  std::cout << std::left << std::setw(14) << "model" << std::right << std::setw(10)
            << "RMSE (m)" << std::setw(10) << "MAE (m)" << std::setw(8) << "CC"
            << std::setw(6) << "n" << '\n';
  for (const auto& [name, m] : rows) {
    std::cout << std::left << std::setw(14) << name << std::right << std::setw(10)
              << fmt_fixed(m.rmse_m, 3) << std::setw(10) << fmt_fixed(m.mae_m, 3)
              << std::setw(8) << (std::isfinite(m.cc) ? fmt_fixed(m.cc, 3) : "undef") << std::setw(6) << m.n << '\n';
  }
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::size_t n = 232;
  std::optional<std::uint64_t> seed;
  std::string out = "synthetic.csv";
};

int run_synth(const Globals& g, const SynthArgs& a) {
  const std::uint64_t seed = a.seed.value_or(default_seed());
  Manifest manifest("synth");
  ps_dataset* raw = nullptr;
  check(ps_dataset_synthesize(a.n, seed, &raw));
  Dataset ds(raw);
  check(ps_dataset_write_csv(ds.get(), a.out.c_str()));
  const std::string manifest_path = a.out + ".manifest";
  manifest.add("n", std::to_string(a.n));
  manifest.add("seed", std::to_string(seed));
  manifest.add("output.data", a.out);
  manifest.write(manifest_path);
  if (g.format == Format::json_lines) {
    std::cout << json{{"record", "synth"}, {"n", a.n}, {"seed", seed},
                      {"out", a.out}, {"manifest", manifest_path}}.dump()
              << '\n';
  } else {
    std::cout << "wrote " << a.n << " synthetic records to " << a.out << '\n';
  }
  return kExitOk;
}

// -------------------------------------------------------------- summarize

struct SummarizeArgs {
  std::string data;
};

int run_summarize(const Globals& g, const SummarizeArgs& a) {
  Dataset ds = load(a.data);
  ps_summary s{};
  check(ps_dataset_summarize(ds.get(), &s));
  if (g.format == Format::json_lines) {
    for (size_t c = 0; c < PS_COLUMN_COUNT; ++c) {
      const auto& col = s.columns[c];
      std::cout << json{{"record", "column_stats"}, {"column", ps_column_name(c)},
                        {"n", s.n}, {"min", col.min}, {"max", col.max},
                        {"mean", col.mean}, {"std", col.std},
                        {"std_kind", s.sample_std ? "sample" : "population"}}
                       .dump()
                << '\n';
    }
    return kExitOk;
  }
  std::cout << a.data << " (" << s.n << " records, sample standard deviation)\n";
  std::cout << std::left << std::setw(10) << "parameter" << std::right
            << std::setw(10) << "Min" << std::setw(10) << "Max" << std::setw(10)
            << "Mean" << std::setw(10) << "St. dev." << '\n';
  for (size_t c = 0; c < PS_COLUMN_COUNT; ++c) {
    const auto& col = s.columns[c];
    std::cout << std::left << std::setw(10) << ps_column_name(c) << std::right
              << std::setw(10) << fmt_fixed(col.min, 2) << std::setw(10)
              << fmt_fixed(col.max, 2) << std::setw(10) << fmt_fixed(col.mean, 2)
              << std::setw(10) << fmt_fixed(col.std, 2) << '\n';
  }
  return kExitOk;
}

// ------------------------------------------------------------------ train

// Every TrainConfig field can be overridden from the command line.
struct Overrides {
  std::vector<std::size_t> hidden;
  std::optional<std::string> activation;
  std::optional<double> dropout;
  std::optional<std::string> init;
  std::optional<double> uniform_halfwidth;
  std::optional<std::string> updater;
  std::optional<double> learning_rate;
  std::optional<double> momentum;
  std::optional<double> alpha;
  std::optional<double> beta1;
  std::optional<double> beta2;
  std::optional<double> epsilon;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> epochs;
  std::optional<std::string> iteration_unit;
  std::optional<bool> shuffle;
  std::optional<std::size_t> history_interval;

  void attach(CLI::App* cmd) {
    cmd->add_option("--hidden", hidden, "Hidden layer widths, e.g. 100,80,50")
        ->delimiter(',');
    cmd->add_option("--activation", activation, "Hidden activation: relu|sigmoid|tanh|identity");
    cmd->add_option("--dropout", dropout, "Dropout rate on hidden layers, [0,1)");
    cmd->add_option("--init", init, "Weight init: xavier|uniform");
    cmd->add_option("--uniform-halfwidth", uniform_halfwidth, "Uniform init halfwidth (default 0.5)");
    cmd->add_option("--updater", updater, "Updater: adam|momentum");
    cmd->add_option("--lr", learning_rate, "Momentum learning rate (default 0.2)");
    cmd->add_option("--momentum", momentum, "Momentum coefficient (default 0.1)");
    cmd->add_option("--alpha", alpha, "Adam step size (default 0.001)");
    cmd->add_option("--beta1", beta1, "Adam beta1 (default 0.9)");
    cmd->add_option("--beta2", beta2, "Adam beta2 (default 0.999)");
    cmd->add_option("--epsilon", epsilon, "Adam epsilon (default 1e-8)");
    cmd->add_option("--batch-size", batch_size, "Mini-batch size; 0 = full batch");
    cmd->add_option("--epochs", epochs, "Training budget (see --iteration-unit)");
    cmd->add_option("--iteration-unit", iteration_unit, "Budget unit: epoch|update (default epoch)");
    cmd->add_option("--shuffle", shuffle, "Reshuffle mini-batches every epoch (default true)");
    cmd->add_option("--history-interval", history_interval, "Record history every N epochs (default 100)");
  }

  void apply(ps_config* cfg) const {
    if (!hidden.empty()) check(ps_config_set_hidden_layers(cfg, hidden.data(), hidden.size()));
    if (activation) check(ps_config_set_hidden_activation(cfg, activation->c_str()));
    if (dropout) check(ps_config_set_dropout(cfg, *dropout));
    if (init || uniform_halfwidth) {
      const std::string kind = init.value_or(uniform_halfwidth ? "uniform" : "xavier");
      check(ps_config_set_init(cfg, kind.c_str(), uniform_halfwidth.value_or(0.5)));
    }
    const bool adam_flags = alpha || beta1 || beta2 || epsilon;
    const bool momentum_flags = learning_rate || momentum;
    std::string kind = updater.value_or("");
    if (kind.empty() && adam_flags) kind = "adam";
    if (kind.empty() && momentum_flags) kind = "momentum";
    if (kind == "adam") {
      if (momentum_flags) throw Failure{PS_ERR_CONFIG, "--lr/--momentum apply to the momentum updater only"};
      check(ps_config_set_adam(cfg, alpha.value_or(0.001), beta1.value_or(0.9),
                               beta2.value_or(0.999), epsilon.value_or(1e-8)));
    } else if (kind == "momentum") {
      if (adam_flags) throw Failure{PS_ERR_CONFIG, "--alpha/--beta1/--beta2/--epsilon apply to adam only"};
      check(ps_config_set_momentum(cfg, learning_rate.value_or(0.2), momentum.value_or(0.1)));
    } else if (!kind.empty()) {
      throw Failure{PS_ERR_CONFIG, "unknown updater '" + kind + "' (expected adam or momentum)"};
    }
    if (batch_size) check(ps_config_set_batch_size(cfg, *batch_size));
    if (epochs) check(ps_config_set_epochs(cfg, *epochs));
    if (iteration_unit) check(ps_config_set_iteration_unit(cfg, iteration_unit->c_str()));
    if (shuffle) check(ps_config_set_shuffle(cfg, *shuffle ? 1 : 0));
    if (history_interval) check(ps_config_set_history_interval(cfg, *history_interval));
  }
};

struct SplitArgs {
  std::string data;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> split_seed;
  std::size_t n_train = 154;

  void attach(CLI::App* cmd) {
    cmd->add_option("--data", data, "Input CSV (ps,pw,skew,v,h,d50,sigma,scour)")->required();
    cmd->add_option("--seed", seed, std::string("Training seed (default $") + kSeedEnv + " or 42)");
    cmd->add_option("--split-seed", split_seed, std::string("Train/test split seed (default $") + kSeedEnv + " or 42)");
    cmd->add_option("--n-train", n_train, "Training records; the rest form the test set")
        ->capture_default_str();
  }
};

struct TrainArgs {
  SplitArgs split;
  std::string preset = "dnn_paper";
  std::string out_model = "model.psm";
  std::string out_history = "history.csv";
  std::string out_predictions = "predictions.csv";
  std::string out_manifest;
  Overrides overrides;
};

struct Outcome {
  Model model;
  History history;
  Evaluation evaluation;
  ps_metrics metrics{};
};

Outcome fit_and_evaluate(const ps_config* cfg, const ps_dataset* train,
                         const ps_dataset* test) {
  ps_model* m = nullptr;
  ps_history* h = nullptr;
  check(ps_train(cfg, train, test, &m, &h));
  Outcome out{Model(m), History(h), nullptr, {}};
  ps_evaluation* ev = nullptr;
  check(ps_evaluate(out.model.get(), test, &ev));
  out.evaluation.reset(ev);
  check(ps_evaluation_metrics(ev, &out.metrics));
  return out;
}

Config make_config(const std::string& preset, std::uint64_t seed,
                   const Overrides* overrides) {
  ps_config* raw = nullptr;
  check(ps_config_from_preset(preset.c_str(), &raw));
  Config cfg(raw);
  check(ps_config_set_seed(cfg.get(), seed));
  if (overrides != nullptr) overrides->apply(cfg.get());
  check(ps_config_validate(cfg.get()));
  return cfg;
}

void add_metrics(Manifest& m, const std::string& prefix, const ps_metrics& x) {
  m.add(prefix + "cc", std::isfinite(x.cc) ? fmt_exact(x.cc) : "undefined");
  m.add(prefix + "rmse_m", fmt_exact(x.rmse_m));
  m.add(prefix + "mae_m", fmt_exact(x.mae_m));
  m.add(prefix + "n", std::to_string(x.n));
}

int run_train(const Globals& g, const TrainArgs& a) {
  const std::uint64_t seed = a.split.seed.value_or(default_seed());
  const std::uint64_t split_seed = a.split.split_seed.value_or(default_seed());
  Manifest manifest("train");
  Config cfg = make_config(a.preset, seed, &a.overrides);

  Dataset all = load(a.split.data);
  ps_dataset *tr = nullptr, *te = nullptr;
  check(ps_dataset_split(all.get(), a.split.n_train, split_seed, &tr, &te));
  Dataset train(tr), test(te);

  Outcome out = fit_and_evaluate(cfg.get(), train.get(), test.get());
  check(ps_model_save(out.model.get(), a.out_model.c_str()));
  check(ps_history_write_csv(out.history.get(), a.out_history.c_str()));
  check(ps_evaluation_write_predictions(out.evaluation.get(), a.out_predictions.c_str()));

  const std::string manifest_path =
      a.out_manifest.empty() ? a.out_model + ".manifest" : a.out_manifest;
  manifest.add("data", a.split.data);
  manifest.add("seed", std::to_string(seed));
  manifest.add("split_seed", std::to_string(split_seed));
  manifest.add("n_train", std::to_string(ps_dataset_size(train.get())));
  manifest.add("n_test", std::to_string(ps_dataset_size(test.get())));
  manifest.add_config("config.", cfg.get());
  manifest.add("updater_steps", std::to_string(ps_history_updater_steps(out.history.get())));
  add_metrics(manifest, "metrics.", out.metrics);
  manifest.add("output.model", a.out_model);
  manifest.add("output.history", a.out_history);
  manifest.add("output.predictions", a.out_predictions);
  manifest.write(manifest_path);

  emit_metrics_table(g, {{a.preset, out.metrics}});
  return kExitOk;
}

// --------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string model;
  std::string data;
  std::string out_predictions = "predictions.csv";
};

int run_evaluate(const Globals& g, const EvaluateArgs& a) {
  Manifest manifest("evaluate");
  ps_model* raw = nullptr;
  check(ps_model_load(a.model.c_str(), &raw));
  Model model(raw);
  Dataset ds = load(a.data);
  ps_evaluation* ev = nullptr;
  check(ps_evaluate(model.get(), ds.get(), &ev));
  Evaluation evaluation(ev);
  ps_metrics m{};
  check(ps_evaluation_metrics(ev, &m));
  check(ps_evaluation_write_predictions(ev, a.out_predictions.c_str()));
  manifest.add("model", a.model);
  manifest.add("data", a.data);
  add_metrics(manifest, "metrics.", m);
  manifest.add("output.predictions", a.out_predictions);
  manifest.write(a.out_predictions + ".manifest");
  emit_metrics_table(g, {{fs::path(a.model).filename().string(), m}});
  return kExitOk;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  SplitArgs split;
  std::string out_dir = ".";
  std::optional<std::size_t> dnn_epochs;
  std::optional<std::size_t> bpnn_epochs;
};

int run_compare(const Globals& g, const CompareArgs& a) {
  const std::uint64_t seed = a.split.seed.value_or(default_seed());
  const std::uint64_t split_seed = a.split.split_seed.value_or(default_seed());
  Manifest manifest("compare");

  Overrides bpnn_over, dnn_over;
  bpnn_over.epochs = a.bpnn_epochs;
  dnn_over.epochs = a.dnn_epochs;
  Config bpnn_cfg = make_config("bpnn_paper", seed, &bpnn_over);
  Config dnn_cfg = make_config("dnn_paper", seed, &dnn_over);

  Dataset all = load(a.split.data);
  ps_dataset *tr = nullptr, *te = nullptr;
  check(ps_dataset_split(all.get(), a.split.n_train, split_seed, &tr, &te));
  Dataset train(tr), test(te);

  const fs::path dir(a.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{PS_ERR_IO, "cannot create '" + dir.string() + "': " + ec.message()};

  // Independent jobs: distinct handles, nothing shared but read-only data.
  auto dnn_job = std::async(std::launch::async, [&] {
    return fit_and_evaluate(dnn_cfg.get(), train.get(), test.get());
  });
  Outcome bpnn = fit_and_evaluate(bpnn_cfg.get(), train.get(), test.get());
  Outcome dnn = dnn_job.get();

  const std::string bpnn_pred = (dir / "predictions_bpnn.csv").string();
  const std::string dnn_pred = (dir / "predictions_dnn.csv").string();
  check(ps_evaluation_write_predictions(bpnn.evaluation.get(), bpnn_pred.c_str()));
  check(ps_evaluation_write_predictions(dnn.evaluation.get(), dnn_pred.c_str()));

  manifest.add("data", a.split.data);
  manifest.add("seed", std::to_string(seed));
  manifest.add("split_seed", std::to_string(split_seed));
  manifest.add("n_train", std::to_string(ps_dataset_size(train.get())));
  manifest.add("n_test", std::to_string(ps_dataset_size(test.get())));
  manifest.add_config("bpnn.config.", bpnn_cfg.get());
  manifest.add_config("dnn.config.", dnn_cfg.get());
  add_metrics(manifest, "bpnn.metrics.", bpnn.metrics);
  add_metrics(manifest, "dnn.metrics.", dnn.metrics);
  manifest.add("output.bpnn_predictions", bpnn_pred);
  manifest.add("output.dnn_predictions", dnn_pred);
  manifest.write(dir / "compare.manifest");

  emit_metrics_table(g, {{"bpnn_paper", bpnn.metrics}, {"dnn_paper", dnn.metrics}});
  return kExitOk;
}

// -------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  std::string activation = "sigmoid";
  std::uint64_t seed = 7;
  bool corrupt = false;
};

int run_gradcheck(const Globals& g, const GradcheckArgs& a) {
  ps_gradcheck_options opts;
  ps_gradcheck_default_options(&opts);
  opts.hidden_activation = a.activation.c_str();
  opts.seed = a.seed;
  opts.corrupt_backward = a.corrupt ? 1 : 0;
  ps_gradcheck_report rep{};
  check(ps_gradient_check(&opts, &rep));

  if (g.format == Format::json_lines) {
    json layers = json::array();
    for (size_t k = 0; k < rep.layer_count; ++k) layers.push_back(rep.layer_max_relative_error[k]);
    std::cout << json{{"record", "gradcheck"}, {"activation", a.activation},
                      {"max_relative_error", rep.max_relative_error},
                      {"max_small_abs_error", rep.max_small_abs_error},
                      {"layer_max_relative_error", layers},
                      {"parameters_checked", rep.parameters_checked},
                      {"seed_used", rep.seed_used}, {"passed", rep.passed != 0}}
                     .dump()
              << '\n';
  } else {
    std::cout << "gradient check: 7-5-3-1 " << a.activation
              << " network, batch 4, central differences h=1e-6\n";
    for (size_t k = 0; k < rep.layer_count; ++k) {
      std::cout << "  layer " << k << " max relative error "
                << std::scientific << std::setprecision(3)
                << rep.layer_max_relative_error[k] << '\n';
    }
    std::cout << "  max relative error " << rep.max_relative_error
              << " (tolerance 1e-05)\n"
              << "  max absolute error on tiny partials " << rep.max_small_abs_error
              << " (tolerance 1e-08)\n"
              << std::defaultfloat << "  parameters checked " << rep.parameters_checked
              << '\n'
              << (rep.passed ? "PASS" : "FAIL") << '\n';
  }
  return rep.passed ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feedforward network regression for bridge-pier scour depth"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  std::string format = "human";
  app.add_option("--format", format, "Output format: human|json-lines")
      ->check(CLI::IsMember({"human", "json-lines"}))
      ->capture_default_str();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a statistics-matched synthetic dataset");
  synth_cmd->add_option("--n", synth.n, "Number of records")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, std::string("Generator seed (default $") + kSeedEnv + " or 42)");
  synth_cmd->add_option("--out", synth.out, "Output CSV")->capture_default_str();

  SummarizeArgs summarize;
  auto* summarize_cmd = app.add_subcommand("summarize", "Per-column min/max/mean/std of a dataset");
  summarize_cmd->add_option("--data", summarize.data, "Input CSV")->required();

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Split, train, evaluate and export");
  train.split.attach(train_cmd);
  train_cmd->add_option("--preset", train.preset, "dnn_paper|bpnn_paper")
      ->check(CLI::IsMember({"dnn_paper", "bpnn_paper"}))
      ->capture_default_str();
  train_cmd->add_option("--out-model", train.out_model, "Model file")->capture_default_str();
  train_cmd->add_option("--out-history", train.out_history, "History CSV")->capture_default_str();
  train_cmd->add_option("--out-predictions", train.out_predictions, "Test predictions CSV")
      ->capture_default_str();
  train_cmd->add_option("--out-manifest", train.out_manifest, "Manifest (default <out-model>.manifest)");
  train.overrides.attach(train_cmd);

  EvaluateArgs evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved model on a dataset");
  evaluate_cmd->add_option("--model", evaluate.model, "Model file")->required();
  evaluate_cmd->add_option("--data", evaluate.data, "Input CSV")->required();
  evaluate_cmd->add_option("--out-predictions", evaluate.out_predictions, "Predictions CSV")
      ->capture_default_str();

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "Train both presets and compare on the test split");
  compare.split.attach(compare_cmd);
  compare_cmd->add_option("--out-dir", compare.out_dir, "Directory for predictions and manifest")
      ->capture_default_str();
  compare_cmd->add_option("--dnn-epochs", compare.dnn_epochs, "Override dnn_paper epochs (default 15000)");
  compare_cmd->add_option("--bpnn-epochs", compare.bpnn_epochs, "Override bpnn_paper epochs (default 1500)");

  GradcheckArgs gradcheck;
  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Compare backprop against finite differences");
  gradcheck_cmd->add_option("--activation", gradcheck.activation, "Hidden activation")
      ->capture_default_str();
  gradcheck_cmd->add_option("--seed", gradcheck.seed, "Parameter seed")->capture_default_str();
  gradcheck_cmd->add_flag("--corrupt-backward", gradcheck.corrupt,
                          "Test hook: perturb one analytic gradient")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }
  globals.format = format == "json-lines" ? Format::json_lines : Format::human;

  try {
    if (*synth_cmd) return run_synth(globals, synth);
    if (*summarize_cmd) return run_summarize(globals, summarize);
    if (*train_cmd) return run_train(globals, train);
    if (*evaluate_cmd) return run_evaluate(globals, evaluate);
    if (*compare_cmd) return run_compare(globals, compare);
    if (*gradcheck_cmd) return run_gradcheck(globals, gradcheck);
  } catch (const Failure& f) {
    std::cerr << "error (" << ps_status_name(f.status) << "): " << f.message << '\n';
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

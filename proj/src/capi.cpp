#include "pierscour/pierscour.h"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <utility>

#include "pierscour/error.hpp"
#include "pierscour/train.hpp"

namespace ps = pierscour;

struct ps_dataset {
  ps::Dataset value;
};

struct ps_config {
  ps::TrainConfig train;
  std::string preset;
  std::vector<std::size_t> hidden;
  ps::Activation hidden_activation = ps::Activation::relu;
  double dropout = 0.0;

  void rebuild_layers() {
    train.layers = ps::mlp_layers(hidden, hidden_activation, dropout);
  }
};

struct ps_model {
  ps::Model value;
};

struct ps_history {
  ps::TrainHistory value;
};

struct ps_evaluation {
  ps::Evaluation value;
};

namespace {

thread_local std::string g_last_error;

ps_status status_for(ps::ErrorKind kind) {
  switch (kind) {
    case ps::ErrorKind::shape: return PS_ERR_SHAPE;
    case ps::ErrorKind::domain: return PS_ERR_DOMAIN;
    case ps::ErrorKind::numeric: return PS_ERR_NUMERIC;
    case ps::ErrorKind::schema: return PS_ERR_SCHEMA;
    case ps::ErrorKind::parse: return PS_ERR_PARSE;
    case ps::ErrorKind::validation: return PS_ERR_VALIDATION;
    case ps::ErrorKind::config: return PS_ERR_CONFIG;
    case ps::ErrorKind::io: return PS_ERR_IO;
    case ps::ErrorKind::divergence: return PS_ERR_DIVERGENCE;
    case ps::ErrorKind::undefined_correlation: return PS_ERR_UNDEFINED_CORRELATION;
  }
  return PS_ERR_INTERNAL;
}

ps_status fail(ps_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
ps_status guarded(F&& body) {
  try {
    body();
    return PS_OK;
  } catch (const ps::Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PS_ERR_INTERNAL, "unknown error");
  }
}

#define PS_REQUIRE(cond, what) \
  if (!(cond)) return fail(PS_ERR_INVALID_ARGUMENT, what)

ps::ScourRecord from_c(const ps_record& r) {
  return {r.ps, r.pw, r.skew, r.v, r.h, r.d50, r.sigma, r.scour};
}

ps_record to_c(const ps::ScourRecord& r) {
  return {r.ps, r.pw, r.skew, r.v, r.h, r.d50, r.sigma, r.scour};
}

std::string describe(const ps_config& c) {
  const auto& t = c.train;
  std::ostringstream out;
  out << "preset=" << c.preset << '\n';
  out << "hidden_layers=";
  for (std::size_t i = 0; i < c.hidden.size(); ++i) out << (i ? "," : "") << c.hidden[i];
  out << '\n';
  out << "hidden_activation=" << ps::to_string(c.hidden_activation) << '\n';
  out << "output_activation=identity\n";
  out << "dropout=" << ps::format_double(c.dropout) << '\n';
  out << "init=" << ps::to_string(t.init.kind) << '\n';
  if (t.init.kind == ps::InitKind::uniform_random)
    out << "uniform_halfwidth=" << ps::format_double(t.init.uniform_halfwidth) << '\n';
  if (const auto* a = std::get_if<ps::AdamConfig>(&t.updater)) {
    out << "updater=adam\n"
        << "adam_alpha=" << ps::format_double(a->alpha) << '\n'
        << "adam_beta1=" << ps::format_double(a->beta1) << '\n'
        << "adam_beta2=" << ps::format_double(a->beta2) << '\n'
        << "adam_epsilon=" << ps::format_double(a->epsilon) << '\n';
  } else {
    const auto& m = std::get<ps::MomentumConfig>(t.updater);
    out << "updater=momentum\n"
        << "learning_rate=" << ps::format_double(m.learning_rate) << '\n'
        << "momentum=" << ps::format_double(m.momentum) << '\n';
  }
  out << "batch_size=";
  if (t.batch_size) out << *t.batch_size; else out << "full";
  out << '\n';
  out << "epochs=" << t.epochs << '\n';
  out << "iteration_unit=" << ps::to_string(t.iteration_unit) << '\n';
  out << "loss=mse\n";
  out << "seed=" << t.seed << '\n';
  out << "shuffle_each_epoch=" << (t.shuffle_each_epoch ? "true" : "false") << '\n';
  out << "history_interval=" << t.history_interval << '\n';
  return out.str();
}

}  // namespace

extern "C" {

const char* ps_version(void) { return PIERSCOUR_VERSION_STRING; }

const char* ps_status_name(ps_status status) {
  switch (status) {
    case PS_OK: return "ok";
    case PS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case PS_ERR_SHAPE: return "shape_error";
    case PS_ERR_DOMAIN: return "domain_error";
    case PS_ERR_NUMERIC: return "numeric_error";
    case PS_ERR_SCHEMA: return "schema_error";
    case PS_ERR_PARSE: return "parse_error";
    case PS_ERR_VALIDATION: return "validation_error";
    case PS_ERR_CONFIG: return "config_error";
    case PS_ERR_IO: return "io_error";
    case PS_ERR_DIVERGENCE: return "divergence_error";
    case PS_ERR_UNDEFINED_CORRELATION: return "undefined_correlation";
    case PS_ERR_BUFFER_TOO_SMALL: return "buffer_too_small";
    case PS_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* ps_last_error(void) { return g_last_error.c_str(); }

const char* ps_column_name(size_t index) {
  if (index >= ps::kColumnCount) return nullptr;
  return ps::kColumns[index].data();
}

// ---------------------------------------------------------------- data

ps_status ps_dataset_load_csv(const char* path, ps_dataset** out) {
  PS_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new ps_dataset{ps::load_csv(path)}; });
}

ps_status ps_dataset_from_records(const ps_record* records, size_t n,
                                  ps_dataset** out) {
  PS_REQUIRE(out != nullptr && (records != nullptr || n == 0), "null argument");
  return guarded([&] {
    if (n == 0) throw ps::ValidationError("empty dataset");
    ps::Dataset ds;
    std::string problems;
    for (size_t i = 0; i < n; ++i) {
      ds.records.push_back(from_c(records[i]));
      for (const auto& v : ps::violations(ds.records.back()))
        problems += "\n  record " + std::to_string(i) + ": violates \"" + v + "\"";
    }
    if (!problems.empty()) throw ps::ValidationError("invalid records:" + problems);
    *out = new ps_dataset{std::move(ds)};
  });
}

ps_status ps_dataset_synthesize(size_t n, uint64_t seed, ps_dataset** out) {
  PS_REQUIRE(out != nullptr, "null argument");
  return guarded([&] { *out = new ps_dataset{ps::synth_generate(n, seed)}; });
}

ps_status ps_dataset_write_csv(const ps_dataset* ds, const char* path) {
  PS_REQUIRE(ds != nullptr && path != nullptr, "null argument");
  return guarded([&] { ps::write_csv(ds->value, std::filesystem::path(path)); });
}

size_t ps_dataset_size(const ps_dataset* ds) {
  return ds == nullptr ? 0 : ds->value.size();
}

ps_status ps_dataset_record(const ps_dataset* ds, size_t index, ps_record* out) {
  PS_REQUIRE(ds != nullptr && out != nullptr, "null argument");
  PS_REQUIRE(index < ds->value.size(), "record index out of range");
  *out = to_c(ds->value.records[index]);
  return PS_OK;
}

ps_status ps_dataset_split(const ps_dataset* ds, size_t n_train, uint64_t seed,
                           ps_dataset** train, ps_dataset** test) {
  PS_REQUIRE(ds != nullptr && train != nullptr && test != nullptr, "null argument");
  return guarded([&] {
    auto [a, b] = ps::split(ds->value, n_train, seed);
    auto* tr = new ps_dataset{std::move(a)};
    try {
      *test = new ps_dataset{std::move(b)};
    } catch (...) {
      delete tr;
      throw;
    }
    *train = tr;
  });
}

ps_status ps_dataset_summarize(const ps_dataset* ds, ps_summary* out) {
  PS_REQUIRE(ds != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const auto stats = ps::summarize(ds->value);
    out->n = stats.n;
    out->sample_std = stats.sample_std ? 1 : 0;
    for (size_t c = 0; c < ps::kColumnCount; ++c) {
      const auto& s = stats.columns[c];
      out->columns[c] = {s.min, s.max, s.mean, s.std};
    }
  });
}

void ps_dataset_free(ps_dataset* ds) { delete ds; }

// ------------------------------------------------------------- metrics

ps_status ps_metrics_compute(const double* actual, const double* predicted,
                             size_t n, ps_metrics* out) {
  PS_REQUIRE(out != nullptr, "null argument");
  PS_REQUIRE(n == 0 || (actual != nullptr && predicted != nullptr), "null argument");
  return guarded([&] {
    const auto r = ps::report({actual, n}, {predicted, n});
    *out = {r.cc, r.rmse, r.mae, r.n};
  });
}

// -------------------------------------------------------------- config

ps_status ps_config_from_preset(const char* name, ps_config** out) {
  PS_REQUIRE(name != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    const ps::Preset p = ps::parse_preset(name);
    auto cfg = std::make_unique<ps_config>();
    cfg->train = ps::preset_config(p);
    cfg->preset = std::string(ps::to_string(p));
    if (p == ps::Preset::dnn_paper) {
      cfg->hidden = {100, 80, 50};
      cfg->hidden_activation = ps::Activation::relu;
    } else {
      cfg->hidden = {8};
      cfg->hidden_activation = ps::Activation::sigmoid;
    }
    cfg->rebuild_layers();
    *out = cfg.release();
  });
}

ps_status ps_config_clone(const ps_config* cfg, ps_config** out) {
  PS_REQUIRE(cfg != nullptr && out != nullptr, "null argument");
  return guarded([&] { *out = new ps_config(*cfg); });
}

ps_status ps_config_set_hidden_layers(ps_config* cfg, const size_t* widths,
                                      size_t count) {
  PS_REQUIRE(cfg != nullptr && (widths != nullptr || count == 0), "null argument");
  PS_REQUIRE(count + 1 <= PS_MAX_LAYERS, "too many hidden layers");
  return guarded([&] {
    std::vector<std::size_t> hidden(widths, widths + count);
    for (auto w : hidden)
      if (w == 0) throw ps::ConfigError("hidden layer widths must be >= 1");
    cfg->hidden = std::move(hidden);
    cfg->rebuild_layers();
  });
}

ps_status ps_config_set_hidden_activation(ps_config* cfg, const char* name) {
  PS_REQUIRE(cfg != nullptr && name != nullptr, "null argument");
  return guarded([&] {
    cfg->hidden_activation = ps::parse_activation(name);
    cfg->rebuild_layers();
  });
}

ps_status ps_config_set_dropout(ps_config* cfg, double rate) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  return guarded([&] {
    if (!(rate >= 0.0 && rate < 1.0))
      throw ps::ConfigError("dropout rate must lie in [0, 1)");
    cfg->dropout = rate;
    cfg->rebuild_layers();
  });
}

ps_status ps_config_set_init(ps_config* cfg, const char* kind,
                             double uniform_halfwidth) {
  PS_REQUIRE(cfg != nullptr && kind != nullptr, "null argument");
  return guarded([&] {
    ps::InitScheme scheme{ps::parse_init_kind(kind), uniform_halfwidth};
    if (scheme.kind == ps::InitKind::xavier_gaussian) scheme.uniform_halfwidth = 0.5;
    scheme.validate();
    cfg->train.init = scheme;
  });
}

ps_status ps_config_set_adam(ps_config* cfg, double alpha, double beta1,
                             double beta2, double epsilon) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  return guarded([&] {
    ps::AdamConfig a{alpha, beta1, beta2, epsilon};
    a.validate();
    cfg->train.updater = a;
  });
}

ps_status ps_config_set_momentum(ps_config* cfg, double learning_rate,
                                 double momentum) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  return guarded([&] {
    ps::MomentumConfig m{learning_rate, momentum};
    m.validate();
    cfg->train.updater = m;
  });
}

ps_status ps_config_set_batch_size(ps_config* cfg, size_t batch_size) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  if (batch_size == 0)
    cfg->train.batch_size.reset();
  else
    cfg->train.batch_size = batch_size;
  return PS_OK;
}

ps_status ps_config_set_epochs(ps_config* cfg, size_t epochs) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  if (epochs == 0) return fail(PS_ERR_CONFIG, "epochs must be >= 1");
  cfg->train.epochs = epochs;
  return PS_OK;
}

ps_status ps_config_set_iteration_unit(ps_config* cfg, const char* unit) {
  PS_REQUIRE(cfg != nullptr && unit != nullptr, "null argument");
  return guarded([&] { cfg->train.iteration_unit = ps::parse_iteration_unit(unit); });
}

ps_status ps_config_set_seed(ps_config* cfg, uint64_t seed) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  cfg->train.seed = seed;
  return PS_OK;
}

ps_status ps_config_set_shuffle(ps_config* cfg, int shuffle_each_epoch) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  cfg->train.shuffle_each_epoch = shuffle_each_epoch != 0;
  return PS_OK;
}

ps_status ps_config_set_history_interval(ps_config* cfg, size_t interval) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  if (interval == 0) return fail(PS_ERR_CONFIG, "history interval must be >= 1");
  cfg->train.history_interval = interval;
  return PS_OK;
}

ps_status ps_config_validate(const ps_config* cfg) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  return guarded([&] { cfg->train.validate(); });
}

ps_status ps_config_planned_steps(const ps_config* cfg, size_t n_train,
                                  uint64_t* out) {
  PS_REQUIRE(cfg != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    cfg->train.validate();
    *out = ps::planned_steps(cfg->train, n_train);
  });
}

ps_status ps_config_describe(const ps_config* cfg, char* buf, size_t cap,
                             size_t* needed) {
  PS_REQUIRE(cfg != nullptr, "null argument");
  PS_REQUIRE(buf != nullptr || cap == 0, "null buffer");
  std::string text;
  const ps_status st = guarded([&] { text = describe(*cfg); });
  if (st != PS_OK) return st;
  if (needed != nullptr) *needed = text.size() + 1;
  if (cap < text.size() + 1) {
    if (cap > 0) buf[0] = '\0';
    return fail(PS_ERR_BUFFER_TOO_SMALL, "describe buffer too small");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return PS_OK;
}

void ps_config_free(ps_config* cfg) { delete cfg; }

// ---------------------------------------------------- training / model

ps_status ps_train(const ps_config* cfg, const ps_dataset* train,
                   const ps_dataset* validation, ps_model** model,
                   ps_history** history) {
  PS_REQUIRE(cfg != nullptr && train != nullptr && model != nullptr,
             "null argument");
  return guarded([&] {
    auto result = ps::train(cfg->train, train->value,
                            validation ? &validation->value : nullptr);
    auto m = std::make_unique<ps_model>(ps_model{std::move(result.model)});
    if (history != nullptr) *history = new ps_history{std::move(result.history)};
    *model = m.release();
  });
}

size_t ps_history_size(const ps_history* h) {
  return h == nullptr ? 0 : h->value.entries.size();
}

ps_status ps_history_entry_at(const ps_history* h, size_t index,
                              ps_history_entry* out) {
  PS_REQUIRE(h != nullptr && out != nullptr, "null argument");
  PS_REQUIRE(index < h->value.entries.size(), "history index out of range");
  const auto& e = h->value.entries[index];
  *out = {e.epoch, e.train_loss, e.val_rmse_m ? 1 : 0, e.val_rmse_m.value_or(0.0)};
  return PS_OK;
}

uint64_t ps_history_updater_steps(const ps_history* h) {
  return h == nullptr ? 0 : h->value.updater_steps;
}

size_t ps_history_epochs_run(const ps_history* h) {
  return h == nullptr ? 0 : h->value.epochs_run;
}

ps_status ps_history_write_csv(const ps_history* h, const char* path) {
  PS_REQUIRE(h != nullptr && path != nullptr, "null argument");
  return guarded([&] { ps::write_history_csv(h->value, std::filesystem::path(path)); });
}

void ps_history_free(ps_history* h) { delete h; }

ps_status ps_model_save(const ps_model* model, const char* path) {
  PS_REQUIRE(model != nullptr && path != nullptr, "null argument");
  return guarded([&] { ps::save_model(model->value, std::filesystem::path(path)); });
}

ps_status ps_model_load(const char* path, ps_model** out) {
  PS_REQUIRE(path != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new ps_model{ps::load_model(std::filesystem::path(path))};
  });
}

size_t ps_model_layer_count(const ps_model* model) {
  return model == nullptr ? 0 : model->value.layers.size();
}

size_t ps_model_parameter_count(const ps_model* model) {
  return model == nullptr ? 0 : model->value.params.parameter_count();
}

ps_status ps_model_predict(const ps_model* model, const ps_dataset* ds,
                           double* out, size_t cap) {
  PS_REQUIRE(model != nullptr && ds != nullptr && out != nullptr, "null argument");
  if (cap < ds->value.size())
    return fail(PS_ERR_BUFFER_TOO_SMALL, "prediction buffer too small");
  return guarded([&] {
    const auto pred = ps::predict_meters(model->value, ds->value);
    std::copy(pred.begin(), pred.end(), out);
  });
}

void ps_model_free(ps_model* model) { delete model; }

ps_status ps_evaluate(const ps_model* model, const ps_dataset* test,
                      ps_evaluation** out) {
  PS_REQUIRE(model != nullptr && test != nullptr && out != nullptr, "null argument");
  return guarded([&] {
    *out = new ps_evaluation{ps::evaluate(model->value, test->value)};
  });
}

ps_status ps_evaluation_metrics(const ps_evaluation* ev, ps_metrics* out) {
  PS_REQUIRE(ev != nullptr && out != nullptr, "null argument");
  const auto& m = ev->value.metrics;
  *out = {m.cc, m.rmse, m.mae, m.n};
  return PS_OK;
}

size_t ps_evaluation_size(const ps_evaluation* ev) {
  return ev == nullptr ? 0 : ev->value.predictions.size();
}

ps_status ps_evaluation_prediction(const ps_evaluation* ev, size_t index,
                                   double* actual_m, double* predicted_m) {
  PS_REQUIRE(ev != nullptr, "null argument");
  PS_REQUIRE(index < ev->value.predictions.size(), "prediction index out of range");
  const auto& p = ev->value.predictions[index];
  if (actual_m != nullptr) *actual_m = p.actual_m;
  if (predicted_m != nullptr) *predicted_m = p.predicted_m;
  return PS_OK;
}

ps_status ps_evaluation_write_predictions(const ps_evaluation* ev,
                                          const char* path) {
  PS_REQUIRE(ev != nullptr && path != nullptr, "null argument");
  return guarded([&] {
    ps::write_predictions_csv(ev->value, std::filesystem::path(path));
  });
}

void ps_evaluation_free(ps_evaluation* ev) { delete ev; }

// ------------------------------------------------------ gradient check

void ps_gradcheck_default_options(ps_gradcheck_options* out) {
  if (out == nullptr) return;
  const ps::GradientCheckOptions d;
  *out = ps_gradcheck_options{};
  out->width_count = d.widths.size();
  for (size_t i = 0; i < d.widths.size(); ++i) out->widths[i] = d.widths[i];
  out->hidden_activation = nullptr;
  out->batch = d.batch;
  out->seed = d.seed;
  out->step = d.step;
  out->corrupt_backward = 0;
}

ps_status ps_gradient_check(const ps_gradcheck_options* opts,
                            ps_gradcheck_report* out) {
  PS_REQUIRE(opts != nullptr && out != nullptr, "null argument");
  PS_REQUIRE(opts->width_count >= 2 && opts->width_count <= PS_MAX_LAYERS + 1,
             "width count out of range");
  return guarded([&] {
    ps::GradientCheckOptions o;
    o.widths.assign(opts->widths, opts->widths + opts->width_count);
    if (opts->hidden_activation != nullptr)
      o.hidden_activation = ps::parse_activation(opts->hidden_activation);
    o.batch = opts->batch;
    o.seed = opts->seed;
    o.step = opts->step;
    o.corrupt_backward = opts->corrupt_backward != 0;
    const auto rep = ps::gradient_check(o);
    *out = ps_gradcheck_report{};
    out->max_relative_error = rep.max_relative_error;
    out->max_small_abs_error = rep.max_small_abs_error;
    out->layer_count = rep.layer_max_relative_error.size();
    for (size_t k = 0; k < out->layer_count; ++k)
      out->layer_max_relative_error[k] = rep.layer_max_relative_error[k];
    out->parameters_checked = rep.parameters_checked;
    out->seed_used = rep.seed_used;
    out->passed = rep.passed ? 1 : 0;
  });
}

}  // extern "C"

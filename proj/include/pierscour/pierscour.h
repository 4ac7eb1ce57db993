/*
 * pierscour C API.
 *
 * Every object is an opaque handle released with its matching *_free
 * function (which accepts NULL). Functions that can fail return a
 * ps_status; on failure ps_last_error() holds a message for the calling
 * thread until its next failing call. Handles are not synchronized: use a
 * handle from one thread at a time. Distinct handles may be used from
 * different threads concurrently.
 */
#ifndef PIERSCOUR_H
#define PIERSCOUR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PIERSCOUR_BUILDING_LIBRARY)
#    define PS_API __declspec(dllexport)
#  else
#    define PS_API __declspec(dllimport)
#  endif
#else
#  define PS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERR_INVALID_ARGUMENT = 1,
  PS_ERR_SHAPE = 2,
  PS_ERR_DOMAIN = 3,
  PS_ERR_NUMERIC = 4,
  PS_ERR_SCHEMA = 5,
  PS_ERR_PARSE = 6,
  PS_ERR_VALIDATION = 7,
  PS_ERR_CONFIG = 8,
  PS_ERR_IO = 9,
  PS_ERR_DIVERGENCE = 10,
  PS_ERR_UNDEFINED_CORRELATION = 11,
  PS_ERR_BUFFER_TOO_SMALL = 12,
  PS_ERR_INTERNAL = 13
} ps_status;

#define PS_FEATURE_COUNT 7
#define PS_COLUMN_COUNT 8
#define PS_MAX_LAYERS 16

PS_API const char* ps_version(void);
PS_API const char* ps_status_name(ps_status status);
PS_API const char* ps_last_error(void);

/* Column names in CSV order: ps,pw,skew,v,h,d50,sigma,scour. */
PS_API const char* ps_column_name(size_t index);

/* ------------------------------------------------------------------ data */

typedef struct ps_dataset ps_dataset;

typedef struct ps_record {
  double ps, pw, skew, v, h, d50, sigma, scour;
} ps_record;

typedef struct ps_column_stats {
  double min, max, mean, std;
} ps_column_stats;

typedef struct ps_summary {
  size_t n;
  int sample_std; /* 1: n-1 denominator */
  ps_column_stats columns[PS_COLUMN_COUNT];
} ps_summary;

PS_API ps_status ps_dataset_load_csv(const char* path, ps_dataset** out);
PS_API ps_status ps_dataset_from_records(const ps_record* records, size_t n,
                                         ps_dataset** out);
PS_API ps_status ps_dataset_synthesize(size_t n, uint64_t seed,
                                       ps_dataset** out);
PS_API ps_status ps_dataset_write_csv(const ps_dataset* ds, const char* path);
PS_API size_t ps_dataset_size(const ps_dataset* ds);
PS_API ps_status ps_dataset_record(const ps_dataset* ds, size_t index,
                                   ps_record* out);
PS_API ps_status ps_dataset_split(const ps_dataset* ds, size_t n_train,
                                  uint64_t seed, ps_dataset** train,
                                  ps_dataset** test);
PS_API ps_status ps_dataset_summarize(const ps_dataset* ds, ps_summary* out);
PS_API void ps_dataset_free(ps_dataset* ds);

/* --------------------------------------------------------------- metrics */

typedef struct ps_metrics {
  double cc; /* NaN when undefined (constant predictions, n < 2) */
  double rmse_m;
  double mae_m;
  size_t n;
} ps_metrics;

PS_API ps_status ps_metrics_compute(const double* actual,
                                    const double* predicted, size_t n,
                                    ps_metrics* out);

/* ---------------------------------------------------------------- config */

typedef struct ps_config ps_config;

/* name: "dnn_paper" or "bpnn_paper" */
PS_API ps_status ps_config_from_preset(const char* name, ps_config** out);
PS_API ps_status ps_config_clone(const ps_config* cfg, ps_config** out);
/* Rebuilds the hidden stack; activation and dropout are kept. */
PS_API ps_status ps_config_set_hidden_layers(ps_config* cfg,
                                             const size_t* widths,
                                             size_t count);
/* relu, sigmoid, tanh or identity; applies to every hidden layer. */
PS_API ps_status ps_config_set_hidden_activation(ps_config* cfg,
                                                 const char* name);
PS_API ps_status ps_config_set_dropout(ps_config* cfg, double rate);
/* kind: "xavier" or "uniform"; halfwidth is used by uniform only. */
PS_API ps_status ps_config_set_init(ps_config* cfg, const char* kind,
                                    double uniform_halfwidth);
PS_API ps_status ps_config_set_adam(ps_config* cfg, double alpha, double beta1,
                                    double beta2, double epsilon);
PS_API ps_status ps_config_set_momentum(ps_config* cfg, double learning_rate,
                                        double momentum);
/* 0 selects full-batch training. */
PS_API ps_status ps_config_set_batch_size(ps_config* cfg, size_t batch_size);
PS_API ps_status ps_config_set_epochs(ps_config* cfg, size_t epochs);
/* "epoch" or "update" */
PS_API ps_status ps_config_set_iteration_unit(ps_config* cfg,
                                              const char* unit);
PS_API ps_status ps_config_set_seed(ps_config* cfg, uint64_t seed);
PS_API ps_status ps_config_set_shuffle(ps_config* cfg, int shuffle_each_epoch);
PS_API ps_status ps_config_set_history_interval(ps_config* cfg,
                                                size_t interval);
PS_API ps_status ps_config_validate(const ps_config* cfg);
/* Updater steps a run over n_train records will take. */
PS_API ps_status ps_config_planned_steps(const ps_config* cfg, size_t n_train,
                                         uint64_t* out);
/*
 * Resolved configuration as flat "key=value" lines. Writes at most `cap`
 * bytes including the terminator; *needed receives the full size. Returns
 * PS_ERR_BUFFER_TOO_SMALL when cap is insufficient.
 */
PS_API ps_status ps_config_describe(const ps_config* cfg, char* buf,
                                    size_t cap, size_t* needed);
PS_API void ps_config_free(ps_config* cfg);

/* ------------------------------------------------------ training / model */

typedef struct ps_model ps_model;
typedef struct ps_history ps_history;
typedef struct ps_evaluation ps_evaluation;

typedef struct ps_history_entry {
  size_t epoch;
  double train_loss;
  int has_val_rmse;
  double val_rmse_m;
} ps_history_entry;

/* validation may be NULL. */
PS_API ps_status ps_train(const ps_config* cfg, const ps_dataset* train,
                          const ps_dataset* validation, ps_model** model,
                          ps_history** history);

PS_API size_t ps_history_size(const ps_history* h);
PS_API ps_status ps_history_entry_at(const ps_history* h, size_t index,
                                     ps_history_entry* out);
PS_API uint64_t ps_history_updater_steps(const ps_history* h);
PS_API size_t ps_history_epochs_run(const ps_history* h);
/* CSV: epoch,train_loss,val_rmse_m */
PS_API ps_status ps_history_write_csv(const ps_history* h, const char* path);
PS_API void ps_history_free(ps_history* h);

PS_API ps_status ps_model_save(const ps_model* model, const char* path);
PS_API ps_status ps_model_load(const char* path, ps_model** out);
PS_API size_t ps_model_layer_count(const ps_model* model);
PS_API size_t ps_model_parameter_count(const ps_model* model);
/* Predictions in meters; out must hold ps_dataset_size(ds) values. */
PS_API ps_status ps_model_predict(const ps_model* model, const ps_dataset* ds,
                                  double* out, size_t cap);
PS_API void ps_model_free(ps_model* model);

PS_API ps_status ps_evaluate(const ps_model* model, const ps_dataset* test,
                             ps_evaluation** out);
PS_API ps_status ps_evaluation_metrics(const ps_evaluation* ev,
                                       ps_metrics* out);
PS_API size_t ps_evaluation_size(const ps_evaluation* ev);
PS_API ps_status ps_evaluation_prediction(const ps_evaluation* ev,
                                          size_t index, double* actual_m,
                                          double* predicted_m);
/* CSV: index,actual_m,predicted_m */
PS_API ps_status ps_evaluation_write_predictions(const ps_evaluation* ev,
                                                 const char* path);
PS_API void ps_evaluation_free(ps_evaluation* ev);

/* -------------------------------------------------------- gradient check */

typedef struct ps_gradcheck_options {
  /* Layer widths including input and output; count in [2, PS_MAX_LAYERS+1]. */
  size_t widths[PS_MAX_LAYERS + 1];
  size_t width_count;
  const char* hidden_activation; /* NULL means sigmoid */
  size_t batch;
  uint64_t seed;
  double step;
  int corrupt_backward; /* test hook: perturb one analytic partial */
} ps_gradcheck_options;

typedef struct ps_gradcheck_report {
  double max_relative_error;
  double max_small_abs_error;
  size_t layer_count;
  double layer_max_relative_error[PS_MAX_LAYERS];
  size_t parameters_checked;
  uint64_t seed_used;
  int passed;
} ps_gradcheck_report;

/* 7-5-3-1 sigmoid network, batch 4, seed 7, step 1e-6. */
PS_API void ps_gradcheck_default_options(ps_gradcheck_options* out);
PS_API ps_status ps_gradient_check(const ps_gradcheck_options* opts,
                                   ps_gradcheck_report* out);

#ifdef __cplusplus
}
#endif

#endif /* PIERSCOUR_H */

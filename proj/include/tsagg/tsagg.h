#ifndef TSAGG_H
#define TSAGG_H

/* C interface of libtsagg. Objects are opaque and owned by the caller once
 * returned; release them with the matching *_free. Every call returns a
 * tsagg_status; on failure tsagg_last_error() holds a one-line message for
 * the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TSAGG_API __declspec(dllexport)
#else
#define TSAGG_API __attribute__((visibility("default")))
#endif

typedef enum tsagg_status {
  TSAGG_OK = 0,
  TSAGG_ERR_USAGE = 2,
  TSAGG_ERR_DATA = 3,
  TSAGG_ERR_INFEASIBLE = 4, /* infeasible or unbounded model */
  TSAGG_ERR_NO_INCUMBENT = 5,
  TSAGG_ERR_IO = 6,
  TSAGG_ERR_INTERNAL = 7
} tsagg_status;

typedef struct tsagg_series tsagg_series;   /* raw multi-attribute series */
typedef struct tsagg_typical tsagg_typical; /* typical period set */
typedef struct tsagg_system tsagg_system;   /* energy system configuration */

TSAGG_API const char* tsagg_version(void);
TSAGG_API const char* tsagg_last_error(void);
/* "usage", "data", ... for a status code. */
TSAGG_API const char* tsagg_status_name(tsagg_status status);
/* Frees strings returned through char** out-parameters. */
TSAGG_API void tsagg_string_free(char* s);

/* ---- series ---- */

TSAGG_API tsagg_status tsagg_series_read_csv(const char* path, double step_length_hours,
                                             tsagg_series** out);
/* kinds: comma-separated profile kinds, or "all". */
TSAGG_API tsagg_status tsagg_series_synthetic(const char* kinds, unsigned long long seed,
                                              int n_steps, double step_length_hours,
                                              tsagg_series** out);
TSAGG_API tsagg_status tsagg_series_write_csv(const tsagg_series* series, const char* path);
TSAGG_API tsagg_status tsagg_series_csv(const tsagg_series* series, char** out);
TSAGG_API int tsagg_series_num_attributes(const tsagg_series* series);
TSAGG_API int tsagg_series_num_steps(const tsagg_series* series);
TSAGG_API void tsagg_series_free(tsagg_series* series);

/* Frequency/amplitude lines of every attribute as CSV text. */
TSAGG_API tsagg_status tsagg_spectrum_csv(const tsagg_series* series, char** out);

/* ---- aggregation ---- */

typedef struct tsagg_aggregate_options {
  int n_clusters;
  int steps_per_period;
  const char* method;         /* averaging | kmeans | kmedoids | hierarchical */
  const char* extremes;       /* "attr:criterion,attr:criterion" or NULL */
  const char* extreme_method; /* none | append | new-center | replace */
  unsigned long long seed;
  int kmeans_restarts;
  double kmedoids_time_limit_seconds;
  const char* tail; /* truncate | pad */
} tsagg_aggregate_options;

/* Defaults: 8 clusters of 24 steps, hierarchical, no extremes, seed 0. */
TSAGG_API void tsagg_aggregate_options_init(tsagg_aggregate_options* options);
TSAGG_API tsagg_status tsagg_aggregate(const tsagg_series* series,
                                       const tsagg_aggregate_options* options,
                                       tsagg_typical** out);
/* Writes `path` and `path`.meta. */
TSAGG_API tsagg_status tsagg_typical_write(const tsagg_typical* set, const char* path);
TSAGG_API tsagg_status tsagg_typical_read(const char* path, tsagg_typical** out);
TSAGG_API int tsagg_typical_num_periods(const tsagg_typical* set);
TSAGG_API void tsagg_typical_free(tsagg_typical* set);

/* attribute,rmse_profile,rmse_duration for `set` against the series it was
 * built from, as CSV text. */
TSAGG_API tsagg_status tsagg_indicators_csv(const tsagg_series* original, const tsagg_typical* set,
                                            char** out);

/* ---- energy system model ---- */

TSAGG_API tsagg_status tsagg_system_load(const char* path, tsagg_system** out);
TSAGG_API void tsagg_system_free(tsagg_system* system);

typedef struct tsagg_solve_options {
  double time_limit_seconds; /* <= 0: none */
  double gap_tolerance;
  const char* export_lp; /* LP file written before solving, or NULL */
} tsagg_solve_options;

TSAGG_API void tsagg_solve_options_init(tsagg_solve_options* options);

/* Exactly one of `profiles` (full horizon) and `set` (typical periods) must
 * be given. The JSON report is returned in *report_json even when the model
 * is infeasible, in which case the status says so. */
TSAGG_API tsagg_status tsagg_model_solve(const tsagg_system* system, const tsagg_series* profiles,
                                         const tsagg_typical* set,
                                         const tsagg_solve_options* options, char** report_json);

typedef struct tsagg_sweep_options {
  const char* methods;         /* comma-separated */
  const char* n_clusters;      /* comma-separated integers */
  const char* steps_per_period; /* comma-separated integers */
  const char* extremes;
  const char* extreme_method;
  unsigned long long seed;
  double time_limit_seconds; /* per solve, <= 0: none */
} tsagg_sweep_options;

TSAGG_API void tsagg_sweep_options_init(tsagg_sweep_options* options);
/* Long-format CSV text, one row per (method, N_k, N_g) cell. */
TSAGG_API tsagg_status tsagg_sweep(const tsagg_system* system, const tsagg_series* profiles,
                                   const tsagg_sweep_options* options, char** csv);

#ifdef __cplusplus
}
#endif

#endif

/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, The xplx Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to libxplx. Every fallible call returns an xplx_status; on
 * failure xplx_last_error() holds a one-line message for the calling thread.
 * Handles are opaque and must be released with the matching *_free. */

#ifndef XPLX_XPLX_H
#define XPLX_XPLX_H

#include <stddef.h>
#include <stdint.h>

#if defined(XPLX_BUILDING_LIBRARY)
#define XPLX_API __attribute__((visibility("default")))
#else
#define XPLX_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum xplx_status {
  XPLX_OK = 0,
  XPLX_ERR_NEGATIVE_PROBABILITY = 1,
  XPLX_ERR_NON_FINITE = 2,
  XPLX_ERR_SUM_OUT_OF_TOLERANCE = 3,
  XPLX_ERR_MANIFEST_SCHEMA = 4,
  XPLX_ERR_DIMENSION_MISMATCH = 5,
  XPLX_ERR_PAYLOAD_TRUNCATED = 6,
  XPLX_ERR_LINE_COUNT_MISMATCH = 7,
  XPLX_ERR_LABEL_OUT_OF_RANGE = 8,
  XPLX_ERR_PARSE = 9,
  XPLX_ERR_INCOMPLETE_GRID = 10,
  XPLX_ERR_HEADER_MISMATCH = 11,
  XPLX_ERR_IO = 12,
  XPLX_ERR_EMPTY_POPULATION = 13,
  XPLX_ERR_EMPTY_INPUT = 14,
  XPLX_ERR_DEGENERATE_SAMPLE = 15,
  XPLX_ERR_EMPTY_SUBSET = 16,
  XPLX_ERR_CONFIG_INVALID = 17,
  XPLX_ERR_INVALID_ARGUMENT = 18,
  XPLX_ERR_INVARIANT_VIOLATION = 19,
  XPLX_ERR_INTERNAL = 20 /* unexpected exception, allocation failure */
} xplx_status;

/* "DimensionMismatch", "ok", ... Never NULL. */
XPLX_API const char* xplx_status_name(xplx_status status);
/* Message of the last failed call on this thread; "" if none. */
XPLX_API const char* xplx_last_error(void);
XPLX_API const char* xplx_version(void);

/* Warnings go to stderr unless a handler is installed. NULL restores stderr. */
typedef void (*xplx_diagnostic_fn)(const char* message, void* user_data);
XPLX_API void xplx_set_diagnostic_handler(xplx_diagnostic_fn handler, void* user_data);

typedef struct xplx_population xplx_population;
typedef struct xplx_labels xplx_labels;
typedef struct xplx_analysis xplx_analysis;

typedef struct xplx_label_score {
  uint32_t label;
  double value;
} xplx_label_score;

/* Population. A path ending in ".csv" is read as the small CSV layout.
 * threads == 0 uses every hardware thread. */
XPLX_API xplx_status xplx_population_load(const char* manifest_path, size_t threads,
                                          xplx_population** out);
/* Builds a population from n * e * m probabilities (classifier-major, then
 * example-major). Values are quantized to float32 like payload files. */
XPLX_API xplx_status xplx_population_from_array(const double* values, size_t n, size_t e,
                                                size_t m, xplx_population** out);
XPLX_API void xplx_population_free(xplx_population* population);
XPLX_API xplx_status xplx_population_dims(const xplx_population* population, size_t* n,
                                          size_t* e, size_t* m);
/* Filter spec as on the command line, e.g. "name=strong:train_fraction=1.0". */
XPLX_API xplx_status xplx_population_subset(const xplx_population* population, const char* spec,
                                            xplx_population** out);
XPLX_API xplx_status xplx_population_save(const xplx_population* population,
                                          const char* manifest_path);

XPLX_API xplx_status xplx_labels_load(const char* path, size_t num_examples, size_t num_classes,
                                      xplx_labels** out);
XPLX_API xplx_status xplx_labels_create(const uint32_t* values, size_t num_examples,
                                        size_t num_classes, xplx_labels** out);
XPLX_API void xplx_labels_free(xplx_labels* labels);

/* Per-example C-/X-perplexity and top labels. top_k == 0 means 5. */
XPLX_API xplx_status xplx_analyze(const xplx_population* population, const xplx_labels* labels,
                                  size_t top_k, size_t threads, xplx_analysis** out);
XPLX_API void xplx_analysis_free(xplx_analysis* analysis);
XPLX_API size_t xplx_analysis_count(const xplx_analysis* analysis);
/* Copies `len` values into each non-NULL array; len must equal the count. */
XPLX_API xplx_status xplx_analysis_metrics(const xplx_analysis* analysis, double* c_perplexity,
                                           double* x_perplexity, size_t len);
/* Writes up to `capacity` entries; *written receives the full list length. */
XPLX_API xplx_status xplx_analysis_top_voted(const xplx_analysis* analysis, size_t example,
                                             xplx_label_score* out, size_t capacity,
                                             size_t* written);
XPLX_API xplx_status xplx_analysis_top_expected(const xplx_analysis* analysis, size_t example,
                                                xplx_label_score* out, size_t capacity,
                                                size_t* written);

/* Single-example metrics over n rows of width m (row-major). */
XPLX_API xplx_status xplx_c_perplexity(const double* rows, size_t n, size_t m, double* out);
XPLX_API xplx_status xplx_x_perplexity(const double* rows, size_t n, size_t m, uint32_t label,
                                       double* out);

XPLX_API xplx_status xplx_pearson(const double* x, const double* y, size_t n, double* out);
XPLX_API xplx_status xplx_spearman(const double* x, const double* y, size_t n, double* out);
XPLX_API xplx_status xplx_kendall(const double* x, const double* y, size_t n, double* tau_a,
                                  double* tau_b);

/* Subcommands. Strings may be NULL when unused. */
typedef struct xplx_run_config {
  const char* manifest;
  const char* labels;
  const char* out_dir;
  int format_json;
  size_t threads;
  const char* class_names;
  size_t top_k;
} xplx_run_config;

XPLX_API void xplx_run_config_init(xplx_run_config* config);

XPLX_API xplx_status xplx_cmd_analyze(const xplx_run_config* config);
/* sort_by_xp != 0 orders classes by X-perplexity instead of C-perplexity. */
XPLX_API xplx_status xplx_cmd_classes(const xplx_run_config* config, int sort_by_xp);

typedef struct xplx_flag_options {
  double tau_x;
  double tau_c;
  double tau_s;
  int pairs_from_expected;
} xplx_flag_options;

XPLX_API void xplx_flag_options_init(xplx_flag_options* options);
/* Any count pointer may be NULL. */
XPLX_API xplx_status xplx_cmd_flag(const xplx_run_config* config, const xplx_flag_options* options,
                                   size_t* mislabel, size_t* inappropriate, size_t* pairs);

typedef struct xplx_compare_options {
  size_t bins;
  size_t kde_points;
  int with_kde;
} xplx_compare_options;

XPLX_API void xplx_compare_options_init(xplx_compare_options* options);
XPLX_API xplx_status xplx_cmd_compare(const xplx_run_config* config, const char* const* specs,
                                      size_t spec_count, const xplx_compare_options* options);

typedef struct xplx_synth_options {
  size_t num_classes;
  size_t num_examples;
  const char* tiers; /* "label:count:lo:hi,..."; NULL for the default four tiers */
  double base_concentration;
  double sharpness;
  double confusion;
  double mislabel_fraction;
  uint64_t seed;
  size_t threads;
} xplx_synth_options;

XPLX_API void xplx_synth_options_init(xplx_synth_options* options);
XPLX_API xplx_status xplx_cmd_synth(const xplx_synth_options* options, const char* out_dir);

typedef struct xplx_hist_options {
  int metric_cp; /* 0: X-perplexity, 1: C-perplexity */
  size_t bins;
  size_t kde_points;
} xplx_hist_options;

XPLX_API void xplx_hist_options_init(xplx_hist_options* options);
XPLX_API xplx_status xplx_cmd_hist(const xplx_run_config* config, const xplx_hist_options* options);

#ifdef __cplusplus
}
#endif

#endif /* XPLX_XPLX_H */

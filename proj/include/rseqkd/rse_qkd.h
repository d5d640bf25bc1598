/*
 * Copyright 2026 The rse-qkd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to librse_qkd: key rates, noise thresholds and signal-set
 * optimisation for reduced-state high-dimensional QKD.
 *
 * Every fallible call returns an rse_status. On failure a description is
 * available from rse_last_error() on the calling thread until the next call.
 * Objects returned through `out` pointers are owned by the caller and must be
 * released with the matching *_destroy function.
 */
#ifndef RSE_QKD_H
#define RSE_QKD_H

#include <stddef.h>
#include <stdint.h>

#if defined(RSE_QKD_BUILDING)
#define RSE_API __attribute__((visibility("default")))
#else
#define RSE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rse_status {
    RSE_OK = 0,
    RSE_ERR_INVALID_ARGUMENT = 1,
    RSE_ERR_DOMAIN = 2,
    RSE_ERR_PARSE = 3,
    RSE_ERR_DIMENSION_MISMATCH = 4,
    RSE_ERR_NEGATIVE_ENTRY = 5,
    RSE_ERR_INSUFFICIENT_DATA = 6,
    RSE_ERR_TOO_LARGE = 7,
    RSE_ERR_DEGENERATE = 8,
    RSE_ERR_IO = 9,
    RSE_ERR_INTERNAL = 10
} rse_status;

typedef enum rse_topology { RSE_TOPOLOGY_CYCLE = 0, RSE_TOPOLOGY_PATH = 1 } rse_topology;
typedef enum rse_basis { RSE_BASIS_Z = 0, RSE_BASIS_X = 1 } rse_basis;

typedef enum rse_channel_kind {
    RSE_CHANNEL_DEPOLARIZING = 0,
    RSE_CHANNEL_MODULO = 1,
    RSE_CHANNEL_BLOCK_BIAS = 2
} rse_channel_kind;

typedef enum rse_threshold_regime {
    RSE_REGIME_CROSSING = 0,
    RSE_REGIME_NO_POSITIVE_RATE = 1,
    RSE_REGIME_ALWAYS_POSITIVE = 2
} rse_threshold_regime;

typedef enum rse_rate_metric { RSE_METRIC_PER_SIGNAL = 0, RSE_METRIC_PER_SIFTED_SYMBOL = 1 } rse_rate_metric;
typedef enum rse_objective { RSE_OBJECTIVE_MIN_W = 0, RSE_OBJECTIVE_MIN_BLOCK_OVERLAP = 1 } rse_objective;
typedef enum rse_subset_rule { RSE_RULE_BALANCED = 0, RSE_RULE_BRUTE_FORCE = 1 } rse_subset_rule;

/* Channel family and parameters. block_size == 0 selects sqrt(d). */
typedef struct rse_channel_params {
    rse_channel_kind kind;
    double eps;
    double eps1;
    double eps2;
    int block_size;
    rse_topology topology;
} rse_channel_params;

typedef struct rse_kept_stats {
    double alpha;
    double q;
    int no_kept_events;
} rse_kept_stats;

typedef struct rse_encoding rse_encoding;
typedef struct rse_confusion rse_confusion;
typedef struct rse_tally rse_tally;
typedef struct rse_counts rse_counts;
typedef struct rse_sweep rse_sweep;
typedef struct rse_threshold_map rse_threshold_map;
typedef struct rse_k_sweep rse_k_sweep;

RSE_API const char *rse_version(void);
RSE_API const char *rse_last_error(void);
/* 1-based line of the last ingestion error, 0 if not applicable. */
RSE_API int rse_last_error_line(void);
RSE_API void rse_string_free(char *s);

/* ---- entropy and Devetak-Winter rates ---- */
RSE_API rse_status rse_kary_entropy(double q, int k, double *out);
RSE_API rse_status rse_q_threshold(int k, double *out);
RSE_API rse_status rse_rate_per_sifted_symbol(int k, double q_z, double q_x, double *out);
RSE_API rse_status rse_rate_per_signal(double alpha, int k, double q, double *out);

/* ---- encodings ---- */
RSE_API rse_status rse_encoding_create(int d, const int *indices, size_t k, rse_encoding **out);
RSE_API rse_status rse_encoding_truncation(int d, int k, rse_encoding **out);
RSE_API rse_status rse_encoding_evenly_spaced(int d, int k, rse_encoding **out);
RSE_API rse_status rse_encoding_balanced_block(int d, int block_size, int k, rse_encoding **out);
RSE_API void rse_encoding_destroy(rse_encoding *encoding);
RSE_API int rse_encoding_dimension(const rse_encoding *encoding);
RSE_API int rse_encoding_size(const rse_encoding *encoding);
/* Copies min(k, capacity) indices into out. */
RSE_API rse_status rse_encoding_indices(const rse_encoding *encoding, int *out, size_t capacity);

RSE_API rse_status rse_modulo_counts(const rse_encoding *encoding, rse_topology topology, int64_t *w, int64_t *b);
RSE_API rse_status rse_min_w_on_cycle(int d, int k, int64_t *out);
RSE_API rse_status rse_block_overlap(const rse_encoding *encoding, int block_size, double *out);
RSE_API rse_status rse_e_min(int d, int block_size, int k, double *out);
/* block_size is used only by RSE_OBJECTIVE_MIN_BLOCK_OVERLAP. */
RSE_API rse_status rse_brute_force_optimal(
    int d, int k, rse_objective objective, int block_size, rse_topology topology, rse_encoding **witness,
    double *value);

/* ---- channels ---- */
RSE_API rse_status rse_depol_stats(int d, int k, double eps, rse_kept_stats *out);
RSE_API rse_status rse_depol_threshold_eps(int d, int k, double *out);
RSE_API rse_status rse_depol_alpha_threshold(int d, int k, double *out);
RSE_API rse_status rse_modulo_stats(const rse_encoding *encoding, double eps, rse_topology topology, rse_kept_stats *out);
RSE_API rse_status rse_modulo_threshold_eps(const rse_encoding *encoding, rse_topology topology, double *out);
/* out[0] = correct, out[1] = in-block (each), out[2] = cross-block (each). */
RSE_API rse_status rse_block_populations(int d, int block_size, double eps1, double eps2, double out[3]);
RSE_API rse_status rse_block_stats(
    int d, int block_size, int k, double eps1, double eps2, double overlap, rse_kept_stats *out);
RSE_API rse_status rse_block_threshold_eps2(
    int d, int block_size, int k, double eps1, double overlap, double *out, rse_threshold_regime *regime);
RSE_API rse_status rse_cross_basis_overlap(int d, int block_size, const rse_encoding *encoding_x, double *out);
/* Closed-form stats; for block bias the overlap is taken from the encoding. */
RSE_API rse_status rse_analytic_stats(const rse_channel_params *channel, const rse_encoding *encoding, rse_kept_stats *out);

RSE_API rse_status rse_confusion_build(
    const rse_channel_params *channel, const rse_encoding *encoding, rse_confusion **out);
RSE_API void rse_confusion_destroy(rse_confusion *model);
RSE_API int rse_confusion_size(const rse_confusion *model);
/* Row x has k+1 entries, the last being the inconclusive probability. */
RSE_API rse_status rse_confusion_row(const rse_confusion *model, int x, double *out, size_t capacity);

/* ---- Monte Carlo ---- */
typedef struct rse_sim_config {
    rse_channel_params channel;
    const rse_encoding *encoding;
    uint64_t n_rounds;
    uint64_t seed;
    double basis_bias; /* 0 selects 1/2 */
    unsigned threads;  /* 0 selects rse_default_threads() */
} rse_sim_config;

typedef struct rse_tally_summary {
    uint64_t n_rounds;
    uint64_t matched[2]; /* indexed by rse_basis */
    uint64_t kept[2];
    uint64_t correct[2];
    int k;
    double basis_bias;
} rse_tally_summary;

typedef struct rse_estimate {
    rse_kept_stats stats;
    double alpha_se;
    double q_se;
    int insufficient_data;
} rse_estimate;

RSE_API const char *rse_rng_algorithm(void);
RSE_API unsigned rse_default_threads(void);
RSE_API rse_status rse_simulate(const rse_sim_config *config, rse_tally **out);
RSE_API void rse_tally_destroy(rse_tally *tally);
RSE_API rse_status rse_tally_summary_get(const rse_tally *tally, rse_tally_summary *out);
/* k x (k+1) row-major counts for one basis. */
RSE_API rse_status rse_tally_pair_counts(const rse_tally *tally, rse_basis basis, uint64_t *out, size_t capacity);
RSE_API rse_status rse_estimate_stats(const rse_tally *tally, rse_estimate *out);
RSE_API rse_status rse_empirical_rate(const rse_tally *tally, double *rate, double *standard_error);

/* ---- ingestion ---- */
typedef struct rse_fit_result {
    double eps1;
    double eps2;
    double residual;
    double shot_noise_residual;
    int poor_fit;
} rse_fit_result;

typedef struct rse_k_sweep_row {
    int k;
    rse_kept_stats z;
    rse_kept_stats x;
    double alpha;
    double q;
    double rate_per_signal;
    int is_argmax;
    int fell_back;
} rse_k_sweep_row;

/* Reads Z and X matrices from one or more CSV files. */
RSE_API rse_status rse_counts_load_files(const char *const *paths, size_t n_paths, rse_counts **out);
RSE_API rse_status rse_counts_load_string(const char *text, rse_counts **out);
/* Rounded expected counts, `exposure` trials per sent index, both bases. */
RSE_API rse_status rse_counts_expected(const rse_channel_params *channel, int d, double exposure, rse_counts **out);
RSE_API rse_status rse_counts_sampled(
    const rse_channel_params *channel, int d, uint64_t per_row, uint64_t seed, rse_counts **out);
RSE_API void rse_counts_destroy(rse_counts *counts);
RSE_API int rse_counts_dimension(const rse_counts *counts);
/* Both matrices in CSV form; release with rse_string_free. */
RSE_API rse_status rse_counts_to_csv(const rse_counts *counts, char **out);
RSE_API rse_status rse_subset_stats(
    const rse_counts *counts, rse_basis basis, const rse_encoding *encoding, rse_kept_stats *out);
RSE_API rse_status rse_fit_block_params(const rse_counts *counts, int block_size, rse_fit_result *out);
RSE_API rse_status rse_sweep_k(
    const rse_counts *counts, int block_size, int k_min, int k_max, rse_subset_rule rule, rse_k_sweep **out);
RSE_API void rse_k_sweep_destroy(rse_k_sweep *sweep);
RSE_API size_t rse_k_sweep_size(const rse_k_sweep *sweep);
RSE_API rse_status rse_k_sweep_row_get(const rse_k_sweep *sweep, size_t i, rse_k_sweep_row *out);
/* Copies the chosen subset of row i. */
RSE_API rse_status rse_k_sweep_subset(const rse_k_sweep *sweep, size_t i, int *out, size_t capacity);
RSE_API size_t rse_k_sweep_warning_count(const rse_k_sweep *sweep);
RSE_API const char *rse_k_sweep_warning(const rse_k_sweep *sweep, size_t i);

/* ---- threshold maps and k sweeps ---- */
typedef struct rse_threshold_cell {
    int d;
    int k;
    int valid;
    double eps_threshold;
    int has_alpha_threshold;
    double alpha_threshold;
    rse_threshold_regime regime;
} rse_threshold_cell;

typedef struct rse_sweep_row {
    int d;
    int k;
    double noise;
    rse_kept_stats stats;
    double rate_per_signal;
    double rate_per_sifted_symbol;
    int is_argmax;
} rse_sweep_row;

RSE_API rse_status rse_threshold_map_build(
    const rse_channel_params *channel, int d_min, int d_max, int k_min, int k_max, rse_threshold_map **out);
RSE_API void rse_threshold_map_destroy(rse_threshold_map *map);
RSE_API size_t rse_threshold_map_size(const rse_threshold_map *map);
RSE_API rse_status rse_threshold_map_cell(const rse_threshold_map *map, size_t i, rse_threshold_cell *out);

RSE_API rse_status rse_analytic_sweep(
    const rse_channel_params *channel, int d, int k_min, int k_max, const double *noise, size_t n_noise,
    rse_rate_metric metric, rse_sweep **out);
RSE_API void rse_sweep_destroy(rse_sweep *sweep);
RSE_API size_t rse_sweep_size(const rse_sweep *sweep);
RSE_API rse_status rse_sweep_row_get(const rse_sweep *sweep, size_t i, rse_sweep_row *out);

/* Sets *found = 0 when argmax k == d does not flip inside [lo, hi]. */
RSE_API rse_status rse_find_crossover(
    const rse_channel_params *channel, int d, double lo, double hi, rse_rate_metric metric, double *out, int *found);

#ifdef __cplusplus
}
#endif

#endif

#ifndef ALCC_H
#define ALCC_H

/* C interface to the analog coded-computing library.
 *
 * Conventions:
 *   - Every fallible call returns alcc_status; ALCC_OK is 0. On failure the
 *     thread-local message from alcc_last_error() describes the cause and
 *     output parameters are left untouched.
 *   - Objects come back through opaque handles released with the matching
 *     *_free function. Freeing NULL is a no-op.
 *   - Returned strings are heap-allocated and must be released with
 *     alcc_string_free.
 *   - Matrix payloads cross the boundary as dense row-major double arrays.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum alcc_status {
    ALCC_OK = 0,
    ALCC_ERR_INVALID_ARGUMENT = 1,
    ALCC_ERR_CONFIG = 2,
    ALCC_ERR_DIMENSION = 3,
    ALCC_ERR_DATA_RANGE = 4,
    ALCC_ERR_SINGULAR = 5,
    ALCC_ERR_INSUFFICIENT_WORKERS = 6,
    ALCC_ERR_DUPLICATE_INDEX = 7,
    ALCC_ERR_IO = 8,
    ALCC_ERR_NONFINITE = 9,
    ALCC_ERR_RUNTIME = 10
} alcc_status;

typedef struct alcc_params alcc_params;   /* protocol parameter bundle */
typedef struct alcc_polyfn alcc_polyfn;   /* polynomial matrix function */
typedef struct alcc_batch alcc_batch;     /* list of equal-shape real matrices */
typedef struct alcc_shares alcc_shares;   /* encoded worker shares */
typedef struct alcc_evals alcc_evals;     /* worker evaluation results */

/* Library version string, static storage, never freed by the caller. */
const char* alcc_version(void);

/* Message for the most recent failure on this thread; empty string if none.
 * Valid until the next library call on the same thread. */
const char* alcc_last_error(void);

void alcc_string_free(char* s);

/* Runs the built-in closed-form battery. *report_out (optional) receives the
 * line-per-check text. Returns ALCC_OK only when every check passes. */
alcc_status alcc_selftest(char** report_out);

/* ------------------------------------------------------------------ */
/* Protocol parameters                                                 */

/* Flat JSON object; keys (all optional, defaults in parentheses):
 *   k (1), t (0), s (0), degree (1), beta (1.5), sigma_n (0), theta (3),
 *   r (1), m (1), n (1), seed (0).
 * Unknown keys are rejected. The bundle is validated on creation. */
alcc_status alcc_params_create_json(const char* json, alcc_params** out);
void alcc_params_free(alcc_params* p);

/* Worker count N derived from (k, t, s, degree). */
alcc_status alcc_params_workers(const alcc_params* p, uint32_t* out);

/* ------------------------------------------------------------------ */
/* Polynomial functions                                                */

/* Accepts a preset name (identity | gram | square) or an inline JSON
 * expression-tree description. */
alcc_status alcc_polyfn_create(const char* preset_or_json, alcc_polyfn** out);
void alcc_polyfn_free(alcc_polyfn* f);

/* Total degree plus the growth constant and absolute coefficient sum used by
 * the error bounds, for the given input shape. Any output pointer may be
 * NULL. */
alcc_status alcc_polyfn_bounds(const alcc_polyfn* f, size_t in_rows, size_t in_cols,
                               uint32_t* degree_out, double* growth_out,
                               double* coeff_sum_out);

/* ------------------------------------------------------------------ */
/* Matrix batches                                                      */

alcc_status alcc_batch_create(size_t blocks, size_t rows, size_t cols, alcc_batch** out);

/* Draws `blocks` matrices from "standard_normal" or "uniform" (the latter on
 * [-radius, radius]). The stream matches the data a single-trial experiment
 * generates for the same seed. */
alcc_status alcc_batch_sample(size_t blocks, size_t rows, size_t cols,
                              const char* distribution, double radius,
                              uint64_t seed, alcc_batch** out);

size_t alcc_batch_blocks(const alcc_batch* b);
size_t alcc_batch_rows(const alcc_batch* b);
size_t alcc_batch_cols(const alcc_batch* b);

/* len must equal rows*cols. */
alcc_status alcc_batch_set_block(alcc_batch* b, size_t index, const double* row_major,
                                 size_t len);
alcc_status alcc_batch_get_block(const alcc_batch* b, size_t index, double* out, size_t len);

void alcc_batch_free(alcc_batch* b);

/* ------------------------------------------------------------------ */
/* Encode, evaluate, decode                                            */

/* Batch must hold exactly k blocks of shape m x n with entries within the
 * magnitude bound r. Noise is drawn from the params seed, so repeated calls
 * agree bitwise. */
alcc_status alcc_encode(const alcc_params* p, const alcc_batch* data, alcc_shares** out);

size_t alcc_shares_count(const alcc_shares* s);

alcc_status alcc_shares_save(const alcc_shares* s, const char* path);
alcc_status alcc_shares_load(const char* path, alcc_shares** out);
void alcc_shares_free(alcc_shares* s);

/* Applies the function to every share, producing one result per worker. */
alcc_status alcc_eval_shares(const alcc_polyfn* f, const alcc_shares* s, alcc_evals** out);

/* Reinterprets stored shares as degree-`poly_degree` worker results, for
 * decoding share files produced elsewhere. */
alcc_status alcc_evals_from_shares(const alcc_shares* s, uint32_t poly_degree,
                                   alcc_evals** out);

/* Removes one worker's result, simulating a straggler. */
alcc_status alcc_evals_drop_worker(alcc_evals* e, uint32_t worker_index);

size_t alcc_evals_count(const alcc_evals* e);
void alcc_evals_free(alcc_evals* e);

/* Interpolates the results and returns the k recovered real blocks. With
 * use_all_evals nonzero every available result enters a least-squares fit;
 * otherwise the lowest worker indices are used. max_imag_residue_out
 * (optional) receives the largest imaginary part discarded. */
alcc_status alcc_decode(const alcc_params* p, const alcc_evals* e, int use_all_evals,
                        alcc_batch** blocks_out, double* max_imag_residue_out);

/* ------------------------------------------------------------------ */
/* Bounds                                                              */

/* Worst-case collusion leakage report as JSON:
 *   {"eta_c_bound", "eta_s_bound", "eta_c_trace_bound", "worst_subset",
 *    "subsets_examined", "exhaustive", "d_mean_bound", "eta_s_truncated"}.
 * search_json (optional) tunes the subset search:
 *   {"exhaustive_cap", "sample_count", "seed"}. */
alcc_status alcc_privacy_report_json(const alcc_params* p, const char* search_json,
                                     char** out);

/* Floating-point error bound report as JSON:
 *   {"alcc_upper_bound", "alcc_upper_bound_loose", "beta_bar", "kappa_b",
 *    "lambda_min", "bits", "mantissa_bits"}.
 * The function is evaluated at the block shape carried by the params.
 * non_stragglers lists the worker indices present (NULL: all N). */
alcc_status alcc_accuracy_report_json(const alcc_params* p, const alcc_polyfn* f,
                                      const uint32_t* non_stragglers, size_t count,
                                      uint32_t bits, char** out);

/* Smallest quantization steps a b-bit word supports for the fixed-point
 * baseline, as JSON {"modular", "integer_once"}. */
alcc_status alcc_lcc_delta_bounds_json(uint32_t degree, double coeff_sum, double radius,
                                       uint32_t bits, char** out);

/* Largest prime not exceeding limit, for choosing baseline field moduli. */
alcc_status alcc_largest_prime_at_most(uint64_t limit, uint64_t* out);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

/* Configs are flat JSON objects (see the config documentation); every call
 * validates before running. */

/* Merges a base config (NULL or empty: defaults) with key=value overrides,
 * validates, and returns the normalized config JSON. */
alcc_status alcc_config_normalize_json(const char* config_json,
                                       const char* const* overrides, size_t override_count,
                                       char** out);

/* Runs the experiment; returns {"version", "config", "result"} JSON with
 * per-trial errors, flags, and wall times. */
alcc_status alcc_experiment_run_json(const char* config_json, char** out);

/* Runs the experiment; returns the deterministic per-trial CSV (no wall
 * times, so identical config and seed give identical bytes). */
alcc_status alcc_experiment_run_csv(const char* config_json, char** out);

/* One experiment per axis value (axis: m_total | beta | bits | sigma_n | p),
 * fresh data per cell; returns the deterministic sweep CSV. */
alcc_status alcc_experiment_sweep_csv(const char* config_json, const char* axis,
                                      const double* values, size_t count, char** out);

/* Effective config + seed + library version as JSON, enough to re-run. */
alcc_status alcc_experiment_manifest_json(const char* config_json, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ALCC_H */

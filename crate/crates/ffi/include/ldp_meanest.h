#ifndef LDP_MEANEST_H
#define LDP_MEANEST_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum LdpStatus {
  LDP_STATUS_OK = 0,
  LDP_STATUS_DOMAIN = 1,
  LDP_STATUS_CONFIG = 2,
  LDP_STATUS_INSUFFICIENT_SAMPLES = 3,
  LDP_STATUS_POOL_EXHAUSTED = 4,
  LDP_STATUS_ALREADY_CONSUMED = 5,
  LDP_STATUS_DIMENSION_MISMATCH = 6,
  LDP_STATUS_ESTIMATION_FAILURE = 7,
  LDP_STATUS_CONTRACT = 8,
  LDP_STATUS_NULL_POINTER = 9,
  LDP_STATUS_PANIC = 10,
  LDP_STATUS_IO = 11,
} LdpStatus;

typedef enum LdpPhase1 {
  LDP_PHASE1_STRICT = 0,
  LDP_PHASE1_RELAXED = 1,
  /**
   * Uses `phase1_share` of the pool.
   */
  LDP_PHASE1_SHARE = 2,
} LdpPhase1;

typedef enum LdpNoise {
  LDP_NOISE_GAUSSIAN = 0,
  LDP_NOISE_LAPLACE = 1,
} LdpNoise;

typedef enum LdpMethod {
  LDP_METHOD_KNOWN_BF = 0,
  LDP_METHOD_UNK_VAR = 1,
  LDP_METHOD_LARGE_VAR = 2,
  LDP_METHOD_TRIVIAL_FULL_RANGE = 3,
} LdpMethod;

typedef enum LdpTermination {
  LDP_TERMINATION_ESTIMATE_WITHIN_LAMBDA = 0,
  LDP_TERMINATION_ITERATION_BUDGET_EXHAUSTED = 1,
} LdpTermination;

typedef enum LdpRegime {
  LDP_REGIME_BOUNDED_VARIANCE = 0,
  LDP_REGIME_LARGE_VARIANCE = 1,
} LdpRegime;

/**
 * Opaque one-shot user pool.
 */
typedef struct LdpPool LdpPool;

/**
 * Opaque seeded random stream.
 */
typedef struct LdpRng LdpRng;

typedef struct LdpKnownConfig {
  double sigma;
  double beta;
  double epsilon;
  double delta;
  double r;
  enum LdpPhase1 phase1;
  double phase1_share;
  enum LdpNoise noise;
} LdpKnownConfig;

/**
 * Confidence interval. Fields that do not apply to the producing method
 * are NaN (reals), 0 (counts) or -1 (`guard_fired`).
 */
typedef struct LdpInterval {
  double lo;
  double hi;
  double confidence;
  double mu_tilde;
  double sampling_var;
  enum LdpMethod method;
  size_t n1;
  size_t n2;
  int64_t j_star;
  double t_mu_hat;
  double t_sigma_hat;
  double regime_fraction;
  int32_t guard_fired;
  size_t users_consumed;
} LdpInterval;

typedef struct LdpZTestResult {
  double mu_tilde;
  double sampling_sd;
  double z_score;
  double p_value;
  bool reject;
  size_t n1;
  size_t n2;
} LdpZTestResult;

typedef struct LdpQuantileQuery {
  double p_star;
  double q_min;
  double q_max;
  double lambda;
  size_t iterations;
} LdpQuantileQuery;

typedef struct LdpQuantileResult {
  double threshold;
  size_t iterations_used;
  enum LdpTermination terminated_by;
  double bracket_lo;
  double bracket_hi;
  size_t users_per_iteration;
} LdpQuantileResult;

typedef struct LdpUnknownConfig {
  double sigma_min;
  double sigma_max;
  double beta;
  double epsilon;
  double delta;
  double r;
} LdpUnknownConfig;

typedef struct LdpRegimeDecision {
  enum LdpRegime regime;
  double fraction_estimate;
  size_t users_consumed;
} LdpRegimeDecision;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *ldp_last_error_message(void);

/**
 * Frees a string returned by this library.
 *
 * # Safety
 * `s` must come from this library (or be NULL) and not be freed twice.
 */
void ldp_string_free(char *s);

/**
 * Copies `len` values into a new pool. Returns NULL if `values` is NULL
 * while `len > 0`.
 *
 * # Safety
 * `values` must point to `len` readable doubles.
 */
struct LdpPool *ldp_pool_new(const double *values, size_t len);

/**
 * # Safety
 * `pool` must come from [`ldp_pool_new`] (or be NULL).
 */
void ldp_pool_free(struct LdpPool *pool);

/**
 * Unconsumed users left in the pool (0 for NULL).
 *
 * # Safety
 * `pool` must be a live handle or NULL.
 */
size_t ldp_pool_remaining(const struct LdpPool *pool);

/**
 * Audit log as JSON lines, one `{user_index, mechanism_name, epsilon, delta}`
 * object per consumed user. Free the result with [`ldp_string_free`].
 *
 * # Safety
 * `pool` must be a live handle; `out` must be writable.
 */
enum LdpStatus ldp_pool_audit_json(const struct LdpPool *pool, char **out);

struct LdpRng *ldp_rng_new(uint64_t seed, uint64_t stream_id);

/**
 * # Safety
 * `rng` must come from [`ldp_rng_new`] (or be NULL).
 */
void ldp_rng_free(struct LdpRng *rng);

/**
 * Fills `out` with `len` draws from N(mu, sigma²).
 *
 * # Safety
 * `rng` must be a live handle; `out` must point to `len` writable doubles.
 */
enum LdpStatus ldp_sample_gaussian(struct LdpRng *rng,
                                   double mu,
                                   double sigma,
                                   double *out,
                                   size_t len);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_std_normal_cdf(double x, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_std_normal_inv_cdf(double p, double *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_rr_sample_size(double alpha, double beta, double epsilon, uint64_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_bf_sample_size(double alpha,
                                  double beta,
                                  double epsilon,
                                  size_t d,
                                  uint64_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_quantile_sample_size(double lambda,
                                        double beta,
                                        double epsilon,
                                        size_t iterations,
                                        uint64_t *out);

/**
 * # Safety
 * `out` must be writable.
 */
enum LdpStatus ldp_quantile_iterations(double q_min, double q_max, double tau, size_t *out);

/**
 * # Safety
 * `cfg` must be readable and `out` writable.
 */
enum LdpStatus ldp_known_min_sample_size(const struct LdpKnownConfig *cfg, uint64_t *out);

/**
 * Known-σ confidence interval from every remaining user of `pool`.
 *
 * # Safety
 * Handles must be live; `cfg` readable; `out` writable.
 */
enum LdpStatus ldp_known_bf(struct LdpPool *pool,
                            const struct LdpKnownConfig *cfg,
                            struct LdpRng *rng,
                            struct LdpInterval *out);

/**
 * Two-sided private Z-test of H0: mu = `mu0`.
 *
 * # Safety
 * Handles must be live; `cfg` readable; `out` writable.
 */
enum LdpStatus ldp_ztest(struct LdpPool *pool,
                         const struct LdpKnownConfig *cfg,
                         double mu0,
                         double significance,
                         struct LdpRng *rng,
                         struct LdpZTestResult *out);

/**
 * Private quantile search over `budget` users of `pool`.
 *
 * # Safety
 * Handles must be live; `query` readable; `out` writable.
 */
enum LdpStatus ldp_bin_rr(struct LdpPool *pool,
                          size_t budget,
                          const struct LdpQuantileQuery *query,
                          double epsilon,
                          struct LdpRng *rng,
                          struct LdpQuantileResult *out);

/**
 * Unknown-σ confidence interval from every remaining user of `pool`.
 *
 * # Safety
 * Handles must be live; `cfg` readable; `out` writable.
 */
enum LdpStatus ldp_unk_var(struct LdpPool *pool,
                           const struct LdpUnknownConfig *cfg,
                           struct LdpRng *rng,
                           struct LdpInterval *out);

/**
 * Minimum pool size accepted by [`ldp_unk_var`].
 *
 * # Safety
 * `cfg` readable; `out` writable.
 */
enum LdpStatus ldp_unk_var_min_sample_size(const struct LdpUnknownConfig *cfg, uint64_t *out);

/**
 * Very-large-variance interval from every remaining user of `pool`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum LdpStatus ldp_large_var(struct LdpPool *pool,
                             double epsilon,
                             double r,
                             double beta,
                             struct LdpRng *rng,
                             struct LdpInterval *out);

/**
 * Regime check on the next users of `pool`.
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum LdpStatus ldp_detect_regime(struct LdpPool *pool,
                                 double epsilon,
                                 double beta,
                                 double r,
                                 struct LdpRng *rng,
                                 struct LdpRegimeDecision *out);

/**
 * Regime check followed by the matching estimator (σ_max = 2R).
 *
 * # Safety
 * Handles must be live; `out` writable.
 */
enum LdpStatus ldp_estimate_mean_auto(struct LdpPool *pool,
                                      double sigma_min,
                                      double beta,
                                      double epsilon,
                                      double delta,
                                      double r,
                                      struct LdpRng *rng,
                                      struct LdpInterval *out);

/**
 * JSON rendering of an interval with the same field names as the CLI.
 * Free the result with [`ldp_string_free`].
 *
 * # Safety
 * `ci` readable; `out` writable.
 */
enum LdpStatus ldp_interval_json(const struct LdpInterval *ci, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LDP_MEANEST_H */

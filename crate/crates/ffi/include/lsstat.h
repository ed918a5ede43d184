/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef LSSTAT_H
#define LSSTAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum LsstatStatus {
  LSSTAT_STATUS_OK = 0,
  LSSTAT_STATUS_NULL_POINTER = 1,
  LSSTAT_STATUS_INVALID_UTF8 = 2,
  LSSTAT_STATUS_PARSE = 3,
  LSSTAT_STATUS_TOO_SHORT = 4,
  LSSTAT_STATUS_DOMAIN = 5,
  LSSTAT_STATUS_DEGENERATE = 6,
  LSSTAT_STATUS_NUMERICAL = 7,
  LSSTAT_STATUS_UNSTABLE_MODEL = 8,
  LSSTAT_STATUS_IO = 9,
  LSSTAT_STATUS_BUFFER_TOO_SMALL = 10,
  LSSTAT_STATUS_PANIC = 11,
} LsstatStatus;

typedef enum LsstatEstimator {
  LSSTAT_ESTIMATOR_YULE_WALKER = 0,
  LSSTAT_ESTIMATOR_LEAST_SQUARES = 1,
} LsstatEstimator;

/**
 * Result of [`lsstat_identify`].
 */
typedef struct LsstatIdentification LsstatIdentification;

/**
 * Result of [`lsstat_run_test`].
 */
typedef struct LsstatReport LsstatReport;

/**
 * A `T × d` series.
 */
typedef struct LsstatSeries LsstatSeries;

/**
 * Test settings. Obtain defaults from [`lsstat_test_config_default`].
 */
typedef struct LsstatTestConfig {
  size_t replicates;
  double alpha;
  uint64_t seed;
  /**
   * Fixed sieve order, or -1 for AIC selection.
   */
  int64_t order;
  /**
   * Largest order searched when `order` is -1; 0 means min(T/10, 15).
   */
  size_t p_max;
  enum LsstatEstimator estimator;
  /**
   * Worker threads; 0 uses all cores. Results do not depend on it.
   */
  size_t threads;
} LsstatTestConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Owned by the library.
 */
const char *lsstat_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *lsstat_version(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void lsstat_string_free(char *s);

/**
 * Builds a series from a row-major `t × d` buffer.
 *
 * # Safety
 * `data` must point to `t * d` readable doubles; `out` must be writable.
 */
enum LsstatStatus lsstat_series_from_buffer(const double *data,
                                            size_t t,
                                            size_t d,
                                            bool center,
                                            struct LsstatSeries **out);

/**
 * Reads a CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum LsstatStatus lsstat_series_load_csv(const char *path,
                                         bool header,
                                         bool center,
                                         struct LsstatSeries **out);

/**
 * Simulates a model preset such as `"ar1:0.5"` or `"tv-scale"`.
 *
 * # Safety
 * `model` must be a NUL-terminated string; `out` must be writable.
 */
enum LsstatStatus lsstat_simulate(const char *model,
                                  size_t t,
                                  uint64_t seed,
                                  struct LsstatSeries **out);

/**
 * # Safety
 * `series` must be a live handle or NULL.
 */
size_t lsstat_series_len(const struct LsstatSeries *series);

/**
 * # Safety
 * `series` must be a live handle or NULL.
 */
size_t lsstat_series_dim(const struct LsstatSeries *series);

/**
 * Copies the observations row-major into `buf`, which holds `len` doubles.
 *
 * # Safety
 * `series` must be a live handle and `buf` writable for `len` doubles.
 */
enum LsstatStatus lsstat_series_copy(const struct LsstatSeries *series, double *buf, size_t len);

/**
 * # Safety
 * `series` must come from this library and not have been freed.
 */
void lsstat_series_free(struct LsstatSeries *series);

/**
 * Test statistic without the bootstrap.
 *
 * # Safety
 * `series` must be a live handle and `out` writable.
 */
enum LsstatStatus lsstat_statistic(const struct LsstatSeries *series, double *out);

struct LsstatTestConfig lsstat_test_config_default(void);

/**
 * Runs the bootstrap test. `config` may be NULL for defaults.
 *
 * # Safety
 * `series` must be a live handle, `config` valid or NULL, `out` writable.
 */
enum LsstatStatus lsstat_run_test(const struct LsstatSeries *series,
                                  const struct LsstatTestConfig *config,
                                  struct LsstatReport **out);

/**
 * # Safety
 * `report` must be a live handle or NULL (returns NaN).
 */
double lsstat_report_statistic(const struct LsstatReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL (returns NaN).
 */
double lsstat_report_quantile(const struct LsstatReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL (returns NaN).
 */
double lsstat_report_p_value(const struct LsstatReport *report);

/**
 * # Safety
 * `report` must be a live handle or NULL (returns false).
 */
bool lsstat_report_reject(const struct LsstatReport *report);

/**
 * Selected sieve order.
 *
 * # Safety
 * `report` must be a live handle or NULL (returns 0).
 */
size_t lsstat_report_order(const struct LsstatReport *report);

/**
 * Copies the `d × d` sup matrix row-major into `buf`.
 *
 * # Safety
 * `report` must be a live handle and `buf` writable for `len` doubles.
 */
enum LsstatStatus lsstat_report_sup_matrix(const struct LsstatReport *report,
                                           double *buf,
                                           size_t len);

/**
 * Full JSON report; release with [`lsstat_string_free`].
 *
 * # Safety
 * `report` must be a live handle and `out` writable.
 */
enum LsstatStatus lsstat_report_to_json(const struct LsstatReport *report, char **out);

/**
 * # Safety
 * `report` must come from this library and not have been freed.
 */
void lsstat_report_free(struct LsstatReport *report);

/**
 * Stationary-subset identification with tuning parameter `gamma` in (0, 1/2).
 *
 * # Safety
 * `series` must be a live handle and `out` writable.
 */
enum LsstatStatus lsstat_identify(const struct LsstatSeries *series,
                                  double gamma,
                                  struct LsstatIdentification **out);

/**
 * Size `d'` of the largest subsets.
 *
 * # Safety
 * `id` must be a live handle or NULL (returns 0).
 */
size_t lsstat_identification_d_prime(const struct LsstatIdentification *id);

/**
 * Number of maximum subsets.
 *
 * # Safety
 * `id` must be a live handle or NULL (returns 0).
 */
size_t lsstat_identification_subset_count(const struct LsstatIdentification *id);

/**
 * Copies the 0-based component indices of subset `index` into `buf`
 * (capacity `cap`); `len` receives the subset size.
 *
 * # Safety
 * `id` must be a live handle, `buf` writable for `cap` entries, `len` writable.
 */
enum LsstatStatus lsstat_identification_subset(const struct LsstatIdentification *id,
                                               size_t index,
                                               size_t *buf,
                                               size_t cap,
                                               size_t *len);

/**
 * # Safety
 * `id` must come from this library and not have been freed.
 */
void lsstat_identification_free(struct LsstatIdentification *id);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LSSTAT_H */

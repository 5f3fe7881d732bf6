#ifndef SEMIDIST_H
#define SEMIDIST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdDistribution {
  SD_DISTRIBUTION_NORMAL = 0,
  SD_DISTRIBUTION_CHI_SQUARED = 1,
  SD_DISTRIBUTION_STUDENT_T = 2,
  SD_DISTRIBUTION_FISHER_F = 3,
} SdDistribution;

typedef enum SdHypothesis {
  /**
   * `{θ₀}`
   */
  SD_HYPOTHESIS_POINT = 0,
  /**
   * `θ ≤ θ₀`
   */
  SD_HYPOTHESIS_LOWER_HALF_LINE = 1,
} SdHypothesis;

typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_DOMAIN = 3,
  SD_STATUS_NO_CONVERGENCE = 4,
  SD_STATUS_DEGENERATE_SAMPLE = 5,
  SD_STATUS_MISSING_NUISANCE = 6,
  SD_STATUS_INVALID_PLAN = 7,
  SD_STATUS_PANIC = 8,
} SdStatus;

/**
 * Opaque handle to a configured catalog test.
 */
typedef struct SdProblem SdProblem;

typedef struct SdTestResult {
  bool reject;
  double statistic;
  double eta;
  double alpha;
  double estimate;
} SdTestResult;

/**
 * `hi` is `+INFINITY` for the one-sided tests.
 */
typedef struct SdInterval {
  double lo;
  double hi;
  double gamma;
  double eta;
  double estimate;
} SdInterval;

typedef struct SdReport {
  uint64_t hits;
  uint64_t replications;
  double rate;
  double band_lo;
  double band_hi;
  bool pass;
  uint64_t seed;
} SdReport;

/**
 * Copies the calling thread's last error message into `buf` (always
 * NUL-terminated when `len > 0`) and returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sd_last_error_message(char *buf, size_t len);

/**
 * Density at `x`. `dof2` is read only for the F distribution.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum SdStatus sd_pdf(enum SdDistribution kind, uint32_t dof1, uint32_t dof2, double x, double *out);

/**
 * Distribution function at `x`.
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum SdStatus sd_cdf(enum SdDistribution kind, uint32_t dof1, uint32_t dof2, double x, double *out);

/**
 * Quantile at probability `p` in (0, 1).
 *
 * # Safety
 * `out` must be null or valid for writing one `double`.
 */
enum SdStatus sd_quantile(enum SdDistribution kind,
                          uint32_t dof1,
                          uint32_t dof2,
                          double p,
                          double *out);

/**
 * Creates a problem for the catalog test named `test` (e.g. `"mean-t"`).
 * `m` is the second sample size (0 for one-sample tests). `sigma1` and
 * `sigma2` are the known sigmas where the test needs them; pass 0 when a
 * value is not known.
 *
 * # Safety
 * `test` must be a NUL-terminated string; `out` must be valid for writing
 * one pointer.
 */
enum SdStatus sd_problem_new(const char *test,
                             size_t n,
                             size_t m,
                             double sigma1,
                             double sigma2,
                             struct SdProblem **out);

/**
 * Releases a problem; null is ignored.
 *
 * # Safety
 * `problem` must be null or a handle from [`sd_problem_new`] not yet freed.
 */
void sd_problem_free(struct SdProblem *problem);

/**
 * Runs the test on `x` (and `y` for two-sample tests; otherwise `y` may be
 * null).
 *
 * # Safety
 * `x` must point to `nx` doubles, `y` to `ny` doubles when read, and `out`
 * must be valid for writing.
 */
enum SdStatus sd_run_test(const struct SdProblem *problem,
                          enum SdHypothesis kind,
                          double null_value,
                          double alpha,
                          const double *x,
                          size_t nx,
                          const double *y,
                          size_t ny,
                          struct SdTestResult *out);

/**
 * The `gamma`-confidence interval for `x` (and `y`).
 *
 * # Safety
 * As for [`sd_run_test`].
 */
enum SdStatus sd_confidence_interval(const struct SdProblem *problem,
                                     double gamma,
                                     const double *x,
                                     size_t nx,
                                     const double *y,
                                     size_t ny,
                                     struct SdInterval *out);

/**
 * Coverage of the `gamma`-confidence interval at the true state
 * `(mu1, sigma1)` (and `(mu2, sigma2)` for two-sample tests).
 *
 * # Safety
 * `problem` must be a live handle and `out` valid for writing.
 */
enum SdStatus sd_coverage_experiment(const struct SdProblem *problem,
                                     double mu1,
                                     double sigma1,
                                     double mu2,
                                     double sigma2,
                                     double gamma,
                                     uint64_t replications,
                                     uint64_t seed,
                                     size_t workers,
                                     struct SdReport *out);

/**
 * Rejection rate at a true state inside the null.
 *
 * # Safety
 * As for [`sd_coverage_experiment`].
 */
enum SdStatus sd_size_experiment(const struct SdProblem *problem,
                                 double mu1,
                                 double sigma1,
                                 double mu2,
                                 double sigma2,
                                 enum SdHypothesis kind,
                                 double null_value,
                                 double alpha,
                                 uint64_t replications,
                                 uint64_t seed,
                                 size_t workers,
                                 struct SdReport *out);

#endif  /* SEMIDIST_H */

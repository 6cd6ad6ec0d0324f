#ifndef QPAULI_H
#define QPAULI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every C-ABI call.
 */
typedef enum QpStatus {
  QpOk = 0,
  /**
   * A required pointer argument was NULL.
   */
  QpNullPointer = 1,
  /**
   * Arguments were syntactically or semantically invalid.
   */
  QpInvalidArgument = 2,
  /**
   * The computation itself failed (singular matrix, cap exceeded, ...).
   */
  QpComputeError = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  QpUtf8Error = 4,
  /**
   * Internal panic; the library state is still consistent.
   */
  QpInternalError = 5,
} QpStatus;

/**
 * Opaque seeded sampler for the spectral laws.
 */
typedef struct QpSampler QpSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL when the last call
 * succeeded. The pointer stays valid until the next failing call on the
 * same thread; do not free it.
 */
const char *qp_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a pointer previously returned via a `char**` out-parameter
 * of this library, not yet freed; NULL is accepted and ignored.
 */
void qp_string_free(char *s);

/**
 * Exact moment table as JSON (the same payload as `qpauli moments`).
 *
 * `t` may be NULL for the parameter-free variables and must be an exact
 * rational like `"1/2"` for the interpolants.
 *
 * # Safety
 * `variable` (and `t` when non-NULL) must be NUL-terminated strings;
 * `out_json` must be a valid pointer.
 */
enum QpStatus qp_moments_json(const char *variable, uint32_t order, const char *t, char **out_json);

/**
 * Gram matrix and its exact inverse as JSON (same payload as
 * `qpauli weingarten`).
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum QpStatus qp_weingarten_json(uint32_t k, char **out_json);

/**
 * Exact law of a weighted diagonal sum over the symmetric group, as JSON.
 * `weights` is four comma-separated rationals summing to one.
 *
 * # Safety
 * `weights` must be a NUL-terminated string; `out_json` must be valid.
 */
enum QpStatus qp_s4_law_json(const char *weights, char **out_json);

/**
 * Runs a verification suite; on `Ok`, `failures_out` (when non-NULL)
 * receives the number of failed checks, and the status is `Ok` even when
 * checks fail — inspect the count.
 *
 * # Safety
 * `suite` must be a NUL-terminated string.
 */
enum QpStatus qp_verify(const char *suite, uint32_t max_k, uint32_t *failures_out);

/**
 * Creates a sampler; `t` may be NULL exactly as in [`qp_moments_json`].
 *
 * # Safety
 * `variable` (and `t` when non-NULL) must be NUL-terminated strings;
 * `out_sampler` must be a valid pointer. The handle must be released with
 * [`qp_sampler_free`].
 */
enum QpStatus qp_sampler_new(const char *variable,
                             const char *t,
                             uint64_t seed,
                             struct QpSampler **out_sampler);

/**
 * Runs (or re-runs) the sampler with the stored seed; deterministic for a
 * fixed handle configuration.
 *
 * # Safety
 * `sampler` must be a live handle from [`qp_sampler_new`].
 */
enum QpStatus qp_sampler_run(struct QpSampler *sampler, uint64_t samples, uint32_t max_order);

/**
 * Reads an empirical moment from the last run.
 *
 * # Safety
 * `sampler` must be a live handle; `mean_out` and `stderr_out` must be
 * valid pointers.
 */
enum QpStatus qp_sampler_moment(const struct QpSampler *sampler,
                                uint32_t order,
                                double *mean_out,
                                double *stderr_out);

/**
 * Full JSON payload of the last run (same as `qpauli mc`).
 *
 * # Safety
 * `sampler` must be a live handle; `out_json` must be a valid pointer.
 */
enum QpStatus qp_sampler_report_json(const struct QpSampler *sampler, char **out_json);

/**
 * Releases a sampler handle; NULL is accepted and ignored.
 *
 * # Safety
 * `sampler` must be a handle from [`qp_sampler_new`], not yet freed.
 */
void qp_sampler_free(struct QpSampler *sampler);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* QPAULI_H */

/* C interface for the buffon-star library. Generated by cbindgen; do not edit. */

#ifndef BUFFON_STAR_H
#define BUFFON_STAR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Call outcome. Anything other than `BS_STATUS_OK` leaves the output
// buffers untouched.
typedef enum BsStatus {
  BS_STATUS_OK = 0,
  // A required pointer was null.
  BS_STATUS_NULL_POINTER = 1,
  // Arguments violate a documented precondition (bad spacing, angle
  // range, inadmissible star/lattice pair, zero trials or workers).
  BS_STATUS_VALIDATION = 2,
  // Closed forms asked for an even needle count; simulate instead.
  BS_STATUS_UNSUPPORTED_N = 3,
  // The quadrature oracle did not converge.
  BS_STATUS_QUADRATURE = 4,
  // The output buffer is too small; nothing was written.
  BS_STATUS_BUFFER_TOO_SMALL = 5,
  // An internal invariant failed; please report.
  BS_STATUS_INTERNAL = 6,
} BsStatus;

// Opaque star/lattice configuration.
typedef struct BsConfig BsConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *bs_version(void);

// Static description of a status code.
const char *bs_status_message(enum BsStatus status);

// Maximum per-family intersection count for an `n`-needle star
// (`n/2` rounded up for odd `n`); 0 when `n < 2`.
uint32_t bs_max_intersections(uint32_t n);

// Creates a validated configuration: `n` needles of length `ell` on a
// lattice with spacings `a`, `b` and angle `alpha` in (0, pi/2].
//
// # Safety
// `out` must be a valid pointer. On success it receives a handle that
// must be released with [`bs_config_free`].
enum BsStatus bs_config_new(uint32_t n,
                            double ell,
                            double a,
                            double b,
                            double alpha,
                            struct BsConfig **out);

// Releases a handle from [`bs_config_new`]. Null is a no-op.
//
// # Safety
// `handle` must be null or a pointer previously returned by
// [`bs_config_new`] that has not been freed yet.
void bs_config_free(struct BsConfig *handle);

// Expected total number of intersections; NaN for a null handle.
//
// # Safety
// `handle` must be a live pointer from [`bs_config_new`] (or null).
double bs_expectation(const struct BsConfig *handle);

// Exact probabilities of 0..=2M total intersections at lattice angle
// `alpha` (any finite value; folded internally). Writes `2M+1` doubles.
//
// # Safety
// `handle` must be live; `out` must point to at least `capacity`
// doubles; `written` must be valid.
enum BsStatus bs_probabilities(const struct BsConfig *handle,
                               double alpha,
                               double *out,
                               uintptr_t capacity,
                               uintptr_t *written);

// Probability of at least one intersection.
//
// # Safety
// `handle` must be live and `out` a valid pointer.
enum BsStatus bs_at_least_one(const struct BsConfig *handle, double alpha, double *out);

// Exact joint law P(k intersections with family A, m with family B) as a
// row-major `(M+1) x (M+1)` matrix. `dim` receives `M+1`.
//
// # Safety
// `handle` must be live; `out` must hold `capacity` doubles; `dim` must
// be valid.
enum BsStatus bs_joint_matrix(const struct BsConfig *handle,
                              double alpha,
                              double *out,
                              uintptr_t capacity,
                              uintptr_t *dim);

// Closed-form limit CDF of the relative intersection count; NaN when the
// densities are out of range (`lambda > 0`, `mu >= 0`,
// `2*max(lambda, mu) <= 1`).
double bs_limit_cdf(double lambda, double mu, double xi);

// Single-family limit CDF for density `lambda`; NaN out of range.
double bs_limit_marginal_cdf(double lambda, double xi);

// Monte Carlo estimate of the total-count law: `2M+1` empirical
// probabilities. Bit-identical results for a fixed seed regardless of
// `workers`.
//
// # Safety
// `handle` must be live; `out` must hold `capacity` doubles; `written`
// must be valid.
enum BsStatus bs_simulate(const struct BsConfig *handle,
                          uint64_t trials,
                          uint64_t seed,
                          uint32_t workers,
                          double *out,
                          uintptr_t capacity,
                          uintptr_t *written);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BUFFON_STAR_H */

#ifndef TAUHURWITZ_H
#define TAUHURWITZ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the nonzero values match the CLI exit codes.
 */
typedef enum ThStatus {
  TH_STATUS_OK = 0,
  /**
   * A panic was caught inside the library.
   */
  TH_STATUS_INTERNAL = 1,
  /**
   * Invalid argument or null pointer.
   */
  TH_STATUS_USAGE = 2,
  TH_STATUS_DOMAIN = 3,
  TH_STATUS_ACCURACY = 4,
  TH_STATUS_CAPACITY = 5,
} ThStatus;

/**
 * Which evaluation path `th_tau_at_x` uses.
 */
typedef enum ThTauMethod {
  TH_TAU_METHOD_SERIES = 0,
  TH_TAU_METHOD_DETERMINANT = 1,
  TH_TAU_METHOD_WRONSKIAN = 2,
} ThTauMethod;

/**
 * Opaque weight data `(c, d, β, guard bound)`.
 */
typedef struct ThWeights ThWeights;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty after a success. The
 * pointer stays valid until the next library call on the same thread.
 */
const char *th_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void th_string_free(char *s);

/**
 * Library version as a static string.
 */
const char *th_version(void);

/**
 * Builds weight data from `"p/q"` strings. `guard_bound = 0` selects the default.
 *
 * # Safety
 * `c` and `d` point to `nc` and `nd` valid C strings; `beta` is a C string;
 * `out` is writable.
 */
enum ThStatus th_weights_new(const char *const *c,
                             size_t nc,
                             const char *const *d,
                             size_t nd,
                             const char *beta,
                             size_t guard_bound,
                             struct ThWeights **out);

/**
 * Releases weight data. Null is ignored.
 *
 * # Safety
 * `w` must come from `th_weights_new` and not have been freed already.
 */
void th_weights_free(struct ThWeights *w);

/**
 * `H^d(μ)` from the direct weighted sum, as a `"p/q"` string.
 *
 * # Safety
 * `w` is a live handle, `mu` points to `mu_len` parts, `out` is writable.
 */
enum ThStatus th_weighted_hurwitz(const struct ThWeights *w,
                                  size_t d,
                                  const size_t *mu,
                                  size_t mu_len,
                                  char **out);

/**
 * `H^d(μ)` read off the power-sum expansion of τ, as a `"p/q"` string.
 *
 * # Safety
 * As for [`th_weighted_hurwitz`].
 */
enum ThStatus th_extract_weighted_hurwitz(const struct ThWeights *w,
                                          size_t d,
                                          const size_t *mu,
                                          size_t mu_len,
                                          char **out);

/**
 * Pure Hurwitz number of `k` profiles stored back to back in `parts`, the
 * `i`-th having `lengths[i]` parts.
 *
 * # Safety
 * `lengths` has `k` entries and `parts` has their sum; `out` is writable.
 */
enum ThStatus th_pure_hurwitz(const size_t *parts, const size_t *lengths, size_t k, char **out);

/**
 * The `j`-th coefficient of `φ_k` and the power of `x` it multiplies.
 *
 * # Safety
 * `exponent` and `out` are writable.
 */
enum ThStatus th_phi_coefficient(const struct ThWeights *w,
                                 int64_t k,
                                 size_t j,
                                 int64_t *exponent,
                                 char **out);

/**
 * `φ̃_k(x)` by contour quadrature. `tolerance <= 0` selects the default.
 *
 * # Safety
 * `w` is a live handle; the output pointers are writable.
 */
enum ThStatus th_meijer_phi(const struct ThWeights *w,
                            int64_t k,
                            double x_re,
                            double x_im,
                            double tolerance,
                            double *out_re,
                            double *out_im,
                            double *error_estimate);

/**
 * `τ` at the diagonal matrix with eigenvalues `x[0..n]`. `level` is the
 * Schur truncation for the series path and the series order otherwise.
 *
 * # Safety
 * `x` has `n` entries; `out` is writable.
 */
enum ThStatus th_tau_at_x(const struct ThWeights *w,
                          const double *x,
                          size_t n,
                          enum ThTauMethod method,
                          size_t level,
                          double *out);

/**
 * Relative discrepancy between `τ([X])` and its matrix-integral form.
 *
 * # Safety
 * `x` has `n` positive entries; `discrepancy` is writable.
 */
enum ThStatus th_theorem_check(const struct ThWeights *w,
                               const double *x,
                               size_t n,
                               size_t n_max,
                               double *discrepancy);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAUHURWITZ_H */

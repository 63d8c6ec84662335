#ifndef BANDKERN_H
#define BANDKERN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. Zero is success.
 */
typedef enum {
  BK_STATUS_OK = 0,
  BK_STATUS_CONFIG = 1,
  BK_STATUS_DOMAIN = 2,
  BK_STATUS_TRUNCATION = 3,
  BK_STATUS_ILL_CONDITIONED = 4,
  BK_STATUS_SEARCH_FAILURE = 5,
  BK_STATUS_PRECONDITION = 6,
  BK_STATUS_INTERNAL = 7,
  /**
   * A required pointer was null.
   */
  BK_STATUS_NULL_POINTER = 8,
  /**
   * An output buffer is shorter than required.
   */
  BK_STATUS_BUFFER_TOO_SMALL = 9,
  /**
   * A panic was caught inside the library.
   */
  BK_STATUS_PANIC = 10,
} BkStatus;

typedef enum {
  BK_VERDICT_LIKELY_BOUNDED = 0,
  BK_VERDICT_LIKELY_UNBOUNDED = 1,
  BK_VERDICT_INCONCLUSIVE = 2,
} BkVerdict;

typedef enum {
  /**
   * `a_n = 1 - p/(n + offset)`.
   */
  BK_WEIGHT_KIND_HARMONIC = 0,
  /**
   * `a_n = 1 - 1/(n + 2)^p`; `offset` is ignored.
   */
  BK_WEIGHT_KIND_POWER_LAW = 1,
} BkWeightKind;

/**
 * Opaque handle to a configured space.
 */
typedef struct BkSpace BkSpace;

typedef struct {
  BkWeightKind kind;
  double p;
  double offset;
} BkWeights;

typedef struct {
  double re;
  double im;
} BkComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len - 1` bytes). Returns the full message length
 * in bytes, excluding the terminator.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t bk_last_error_message(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *bk_version(void);

/**
 * Creates a space with roots `exp(2 pi i num_j/den_j)`.
 *
 * # Safety
 * `nums` and `dens` must be valid for `j` values; `out` must be valid for a
 * write. Free the result with [`bk_space_free`].
 */
BkStatus bk_space_new_angles(const int64_t *nums,
                             const uint64_t *dens,
                             size_t j,
                             BkWeights w,
                             BkSpace **out);

/**
 * Creates a space from explicit unimodular roots.
 *
 * # Safety
 * `roots` must be valid for `j` values; `out` must be valid for a write.
 */
BkStatus bk_space_new_points(const BkComplex *roots, size_t j, BkWeights w, BkSpace **out);

/**
 * Frees a space. Null is ignored.
 *
 * # Safety
 * `space` must be null or a pointer returned by a `bk_space_new_*` function
 * that has not been freed.
 */
void bk_space_free(BkSpace *space);

/**
 * Number of roots `J`, or 0 for a null space.
 *
 * # Safety
 * `space` must be null or a live handle.
 */
size_t bk_space_roots(const BkSpace *space);

/**
 * Coefficients `beta_0..beta_J` of `phi`; `out` needs `J + 1` entries.
 *
 * # Safety
 * `space` must be a live handle and `out` valid for `len` values.
 */
BkStatus bk_phi_coeffs(const BkSpace *space, BkComplex *out, size_t len);

/**
 * `K(z, w)` with certified truncation error at most `tol`.
 *
 * # Safety
 * `space` must be a live handle; `value` must be valid for a write;
 * `tail_bound` may be null.
 */
BkStatus bk_kernel_eval(const BkSpace *space,
                        BkComplex z,
                        BkComplex w,
                        double tol,
                        BkComplex *value,
                        double *tail_bound);

/**
 * Column `n` of `C`: `out[k] = c_{n+k,n}` for `k = 0..=k_max`; `out` needs
 * `k_max + 1` entries.
 *
 * # Safety
 * `space` must be a live handle and `out` valid for `len` values.
 */
BkStatus bk_c_column(const BkSpace *space, size_t n, size_t k_max, BkComplex *out, size_t len);

/**
 * Column `n` of the multiplication-by-`z` matrix: `out[m] = c_{n+1+m,n}`
 * for `m < count`, with `count >= J + 1`; `out` needs `count` entries.
 *
 * # Safety
 * `space` must be a live handle and `out` valid for `len` values.
 */
BkStatus bk_mz_column(const BkSpace *space, size_t n, size_t count, BkComplex *out, size_t len);

/**
 * Basis coefficients `c_0..c_{len-1}` of the constant function 1.
 *
 * # Safety
 * `space` must be a live handle and `out` valid for `len` values.
 */
BkStatus bk_constant_expansion(const BkSpace *space, BkComplex *out, size_t len);

/**
 * Basis coefficients `alpha_0..alpha_{len-1}` of `phi g + sum_j b_j K(., z_j)`.
 * `b` holds `J` values.
 *
 * # Safety
 * `space` must be a live handle, `g` valid for `g_len` values, `b` for `J`
 * values and `alpha` for `len` values.
 */
BkStatus bk_reconstruct(const BkSpace *space,
                        const BkComplex *g,
                        size_t g_len,
                        const BkComplex *b,
                        BkComplex *alpha,
                        size_t len);

/**
 * Splits `f = sum alpha_n f_n` as `phi g + sum_j b_j K(., z_j)`. `g` needs
 * `len` entries, `b` needs `J`; `residual` may be null.
 *
 * # Safety
 * `space` must be a live handle, `alpha` and `g` valid for `len` values and
 * `b` for `J` values.
 */
BkStatus bk_decompose(const BkSpace *space,
                      const BkComplex *alpha,
                      size_t len,
                      BkComplex *g,
                      BkComplex *b,
                      double *residual);

/**
 * Norms of the leading `sizes[i] x sizes[i]` sections of `C` and the growth
 * verdict. `sizes` must be strictly increasing; `norms` needs `count`
 * entries.
 *
 * # Safety
 * `space` must be a live handle, `sizes` and `norms` valid for `count`
 * values and `verdict` valid for a write.
 */
BkStatus bk_containment_norms(const BkSpace *space,
                              const size_t *sizes,
                              size_t count,
                              double *norms,
                              BkVerdict *verdict);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BANDKERN_H */

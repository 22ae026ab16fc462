#ifndef QDILOG_H
#define QDILOG_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every function.
 */
typedef enum QdStatus {
  QD_STATUS_OK = 0,
  QD_STATUS_NULL_POINTER = 1,
  QD_STATUS_INVALID_ARGUMENT = 2,
  QD_STATUS_BUDGET_EXHAUSTED = 3,
  QD_STATUS_POLE = 4,
  QD_STATUS_ZERO = 5,
  QD_STATUS_NON_FINITE = 6,
  QD_STATUS_DOMAIN = 7,
  QD_STATUS_PRECONDITION = 8,
  QD_STATUS_RESIDUE_MISMATCH = 9,
  QD_STATUS_DECAY = 10,
  QD_STATUS_BRANCH = 11,
  QD_STATUS_DIVERGENT = 12,
  /**
   * Some verification checks failed.
   */
  QD_STATUS_VERIFY_FAILED = 13,
  QD_STATUS_PANIC = 99,
} QdStatus;

typedef enum QdVariant {
  QD_VARIANT_SB = 0,
  QD_VARIANT_GB_SMALL = 1,
  QD_VARIANT_VETA = 2,
} QdVariant;

/**
 * Opaque parameter handle.
 */
typedef struct QdParam QdParam;

typedef struct QdComplex {
  double re;
  double im;
} QdComplex;

/**
 * A value with its error estimate and the backend that produced it
 * (0 product, 1 integral, 2 functional continuation).
 */
typedef struct QdValue {
  struct QdComplex value;
  double err_estimate;
  int32_t backend;
} QdValue;

/**
 * Creates a parameter from real `b > 0`.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum QdStatus qd_param_from_b(double b, struct QdParam **out);

/**
 * Creates a parameter from complex `b^2`, which must have positive
 * imaginary part or be real and positive.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum QdStatus qd_param_from_b2(struct QdComplex b2, struct QdParam **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `p` must come from a constructor above and not be used afterwards.
 */
void qd_param_free(struct QdParam *p);

/**
 * Writes `b`, `Q` and `q` of the parameter.
 *
 * # Safety
 * `p` must be a live handle; the out-pointers must be valid or null.
 */
enum QdStatus qd_param_values(const struct QdParam *p,
                              struct QdComplex *b,
                              struct QdComplex *big_q,
                              struct QdComplex *q);

/**
 * Euler gamma function.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum QdStatus qd_gamma(struct QdComplex z, struct QdComplex *out);

/**
 * Quantum dilogarithm `G_b(x)`.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writing.
 */
enum QdStatus qd_gb(const struct QdParam *p, struct QdComplex x, double tol, struct QdValue *out);

/**
 * `S_b`, the small-`g_b` function or `V_eta`, each through `G_b`.
 *
 * # Safety
 * `p` must be a live handle and `out` valid for writing.
 */
enum QdStatus qd_variant(const struct QdParam *p,
                         enum QdVariant kind,
                         struct QdComplex x,
                         double tol,
                         struct QdValue *out);

/**
 * Runs one verification suite by name (for example `"gb-identities"`) and
 * writes the pass and fail counts. Returns `VerifyFailed` if any check
 * failed.
 *
 * # Safety
 * `suite` must be a nul-terminated string; the counters may be null.
 */
enum QdStatus qd_verify(const char *suite,
                        double tol,
                        uint64_t seed,
                        uint32_t *passed,
                        uint32_t *failed);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *qd_last_error(void);

#endif  /* QDILOG_H */

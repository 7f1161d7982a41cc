#ifndef OPBALL_H
#define OPBALL_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OpballStatus {
  OPBALL_STATUS_OK = 0,
  OPBALL_STATUS_NULL_POINTER = 1,
  OPBALL_STATUS_INVALID_ARGUMENT = 2,
  OPBALL_STATUS_SINGULAR = 3,
  OPBALL_STATUS_NOT_FINITE = 4,
  OPBALL_STATUS_NUMERICAL = 5,
  OPBALL_STATUS_PANIC = 6,
} OpballStatus;

/**
 * Opaque matrix handle.
 */
typedef struct OpballMatrix OpballMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a real matrix from `rows * cols` row-major doubles.
 *
 * # Safety
 * `data` must point to `rows * cols` doubles and `out` must be writable.
 */
enum OpballStatus opball_matrix_new_real(uintptr_t rows,
                                         uintptr_t cols,
                                         const double *data,
                                         struct OpballMatrix **out);

/**
 * Create a complex matrix from `2 * rows * cols` interleaved row-major doubles.
 *
 * # Safety
 * `data` must point to `2 * rows * cols` doubles and `out` must be writable.
 */
enum OpballStatus opball_matrix_new_complex(uintptr_t rows,
                                            uintptr_t cols,
                                            const double *data,
                                            struct OpballMatrix **out);

/**
 * # Safety
 * `m` must be null or a handle returned by this library, not yet freed.
 */
void opball_matrix_free(struct OpballMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t opball_matrix_rows(const struct OpballMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
uintptr_t opball_matrix_cols(const struct OpballMatrix *m);

/**
 * # Safety
 * `m` must be a live handle.
 */
bool opball_matrix_is_complex(const struct OpballMatrix *m);

/**
 * Copy entries out row-major; complex handles are written interleaved.
 * `len` is the capacity of `out` in doubles.
 *
 * # Safety
 * `out` must be writable for `len` doubles.
 */
enum OpballStatus opball_matrix_copy(const struct OpballMatrix *m, double *out, uintptr_t len);

/**
 * Invariant distance between two ball points.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum OpballStatus opball_rho(const struct OpballMatrix *a,
                             const struct OpballMatrix *b,
                             double *out);

/**
 * Geodesic midpoint; the result is a new handle owned by the caller.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` writable.
 */
enum OpballStatus opball_midpoint(const struct OpballMatrix *a,
                                  const struct OpballMatrix *b,
                                  struct OpballMatrix **out);

/**
 * Möbius map `M_a(x)`; the result is a new handle owned by the caller.
 *
 * # Safety
 * `a`, `x` must be live handles and `out` writable.
 */
enum OpballStatus opball_mobius_apply(const struct OpballMatrix *a,
                                      const struct OpballMatrix *x,
                                      struct OpballMatrix **out);

/**
 * Run a JSON problem document and return the JSON report.
 *
 * `*output` receives a string to release with [`opball_string_free`];
 * `*exit_code` receives the command-line exit code for the report
 * (0 ok, 2 validation error, 3 otherwise). The return value only reports
 * failures of the call itself.
 *
 * # Safety
 * `input` must be a NUL-terminated string; `output` and `exit_code` writable.
 */
enum OpballStatus opball_run_json(const char *input, char **output, int *exit_code);

/**
 * # Safety
 * `s` must be null or a string returned by [`opball_run_json`].
 */
void opball_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *opball_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPBALL_H */

#ifndef SOLVLCK_H
#define SOLVLCK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Tolerance used when `tol` is passed as `0`.
 */
#define SLK_DEFAULT_TOLERANCE 1e-9

typedef enum SlkBackend {
  /**
   * The scalar declared by the input document.
   */
  SLK_BACKEND_FROM_INPUT = 0,
  SLK_BACKEND_RATIONAL = 1,
  SLK_BACKEND_FLOAT = 2,
} SlkBackend;

typedef enum SlkStatus {
  SLK_STATUS_OK = 0,
  /**
   * Malformed or inconsistent input.
   */
  SLK_STATUS_INVALID_INPUT = 2,
  /**
   * A mathematical precondition does not hold.
   */
  SLK_STATUS_PRECONDITION = 3,
  /**
   * The number-field pipeline could not complete.
   */
  SLK_STATUS_PIPELINE = 4,
  SLK_STATUS_NULL_ARGUMENT = 10,
  /**
   * The output buffer is too short; nothing was written.
   */
  SLK_STATUS_BUFFER_TOO_SMALL = 11,
  SLK_STATUS_INTERNAL = 12,
} SlkStatus;

/**
 * A Lie algebra, optionally with a meta-abelian split.
 */
typedef struct SlkAlgebra SlkAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a `lie_algebra` document. `tol` of `0` selects the default.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SlkStatus slk_algebra_from_json(const char *json,
                                     enum SlkBackend backend,
                                     double tol,
                                     struct SlkAlgebra **out);

/**
 * Builds a catalog entry such as `"heisenberg:2"` or `"ot:3"`.
 * `SLK_BACKEND_FROM_INPUT` means rational.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SlkStatus slk_algebra_catalog(const char *name,
                                   enum SlkBackend backend,
                                   double tol,
                                   struct SlkAlgebra **out);

/**
 * # Safety
 * `alg` must come from this library and not have been freed; null is ignored.
 */
void slk_algebra_free(struct SlkAlgebra *alg);

/**
 * Dimension of the algebra, or 0 for a null handle.
 *
 * # Safety
 * `alg` must be null or a live handle.
 */
size_t slk_algebra_dim(const struct SlkAlgebra *alg);

/**
 * Serializes the algebra (with its split) as a `lie_algebra` document.
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum SlkStatus slk_algebra_to_json(const struct SlkAlgebra *alg, char **out);

/**
 * Writes the `dim + 1` Betti numbers to `out`.
 *
 * # Safety
 * `alg` must be a live handle and `out` must hold `len` entries.
 */
enum SlkStatus slk_betti(const struct SlkAlgebra *alg, size_t *out, size_t len);

/**
 * Writes the `dim + 1` dimensions of the cohomology twisted by the closed
 * 1-form given as a `form` document.
 *
 * # Safety
 * `alg` must be a live handle, `theta_json` a NUL-terminated string and
 * `out` must hold `len` entries.
 */
enum SlkStatus slk_twisted_betti(const struct SlkAlgebra *alg,
                                 const char *theta_json,
                                 size_t *out,
                                 size_t len);

/**
 * Lee form of a non-degenerate 2-form, as `{"theta": form, "unique": bool}`.
 *
 * # Safety
 * `alg` must be a live handle, `omega_json` a NUL-terminated string and
 * `out` a valid pointer.
 */
enum SlkStatus slk_lee_form(const struct SlkAlgebra *alg, const char *omega_json, char **out);

/**
 * Runs the Vaisman obstruction check and returns the certificate.
 * `theta_json` may be null, in which case the Lee form of `ω` is used.
 *
 * # Safety
 * `alg` must be a live handle, the JSON arguments NUL-terminated strings
 * (or null for `theta_json`) and `out` a valid pointer.
 */
enum SlkStatus slk_check_vaisman(const struct SlkAlgebra *alg,
                                 const char *omega_json,
                                 const char *theta_json,
                                 char **out);

/**
 * Checks whether products of harmonic forms are harmonic for the given
 * `metric` document. `out_json` may be null.
 *
 * # Safety
 * `alg` must be a live handle, `metric_json` a NUL-terminated string,
 * `formal` a valid pointer and `out_json` null or valid.
 */
enum SlkStatus slk_formality(const struct SlkAlgebra *alg,
                             const char *metric_json,
                             bool *formal,
                             char **out_json);

/**
 * Runs the number-field pipeline on a `field_input` document. The report
 * (field data, algebra, `ω`, `θ`) goes to `out_json`. If `out_alg` is not
 * null it receives the algebra as a float handle.
 *
 * # Safety
 * `field_json` must be a NUL-terminated string, `out_json` a valid pointer
 * and `out_alg` null or valid.
 */
enum SlkStatus slk_build_ot(const char *field_json,
                            double tol,
                            char **out_json,
                            struct SlkAlgebra **out_alg);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on this thread.
 */
const char *slk_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed only once.
 */
void slk_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *slk_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SOLVLCK_H */

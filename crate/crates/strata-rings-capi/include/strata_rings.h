#ifndef STRATA_RINGS_H
#define STRATA_RINGS_H

/* Generated by cbindgen from strata-rings-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum StrataStatus {
  STRATA_STATUS_OK = 0,
  STRATA_STATUS_INVALID_ARGUMENT = 1,
  STRATA_STATUS_OVERFLOW = 2,
  STRATA_STATUS_RESOURCE_LIMIT = 3,
  STRATA_STATUS_NULL_POINTER = 4,
  STRATA_STATUS_BUFFER_TOO_SMALL = 5,
  STRATA_STATUS_INTERNAL = 6,
} StrataStatus;

/**
 * Which family of moduli spaces to work with.
 */
typedef enum StrataFamily {
  STRATA_FAMILY_COMPLEX = 0,
  STRATA_FAMILY_REAL = 1,
} StrataFamily;

/**
 * An ideal presentation together with its rank-computation cache.
 */
typedef struct StrataPresentation StrataPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Version string of the underlying library. The pointer is owned by the
 * library and must not be freed.
 */
const char *strata_version(void);

/**
 * Betti numbers by the closed recursion, in table-row form (the real family
 * lists every degree, the complex family its even degrees). Writes at most
 * `capacity` entries; `out_written` receives the required length.
 *
 * # Safety
 * `out_dims` must point to at least `capacity` writable `uint64_t` slots and
 * `out_written` to a writable `size_t`.
 */
enum StrataStatus strata_betti_recursion(enum StrataFamily family,
                                         uint32_t ell,
                                         uint64_t *out_dims,
                                         size_t capacity,
                                         size_t *out_written);

/**
 * The closed form `2^(ell-1) - 1` for the first real Betti number.
 *
 * # Safety
 * `out` must be a writable `uint64_t` pointer.
 */
enum StrataStatus strata_h1_closed_form(uint32_t ell, uint64_t *out);

/**
 * Builds the boundary-class presentation at level `ell`. On success the
 * handle must be released with `strata_presentation_free`.
 *
 * # Safety
 * `out` must be a writable handle pointer.
 */
enum StrataStatus strata_presentation_new(enum StrataFamily family,
                                          uint32_t ell,
                                          struct StrataPresentation **out);

/**
 * Releases a presentation handle. A null pointer is a no-op.
 *
 * # Safety
 * `p` must be a pointer previously returned by `strata_presentation_new`
 * and not yet freed.
 */
void strata_presentation_free(struct StrataPresentation *p);

/**
 * Number of tagged ideal generators in the presentation.
 *
 * # Safety
 * `p` must be a live handle from `strata_presentation_new`.
 */
enum StrataStatus strata_presentation_generator_count(const struct StrataPresentation *p,
                                                      size_t *out);

/**
 * The presentation as a JSON document; NULL on failure. Free the returned
 * string with `strata_string_free`.
 *
 * # Safety
 * `p` must be a live handle from `strata_presentation_new`.
 */
char *strata_presentation_json(const struct StrataPresentation *p);

/**
 * Releases a string returned by this library. A null pointer is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by `strata_presentation_json`
 * and not yet freed.
 */
void strata_string_free(char *s);

/**
 * Graded dimensions of the quotient ring by exact rank, in table-row form.
 * `max_degree < 0` computes the whole vector; otherwise the computation is
 * truncated at that cohomological degree.
 *
 * # Safety
 * `p` must be a live handle from `strata_presentation_new`.
 */
enum StrataStatus strata_quotient_dims(const struct StrataPresentation *p,
                                       int64_t max_degree,
                                       uint64_t *out_dims,
                                       size_t capacity,
                                       size_t *out_written);

/**
 * Whether the signed degree-2 relation indexed by `(a, b, c)` lies in the
 * real ideal. Requires a real-family handle and `a != b`, `a != c`.
 *
 * # Safety
 * `p` must be a live handle from `strata_presentation_new`.
 */
enum StrataStatus strata_contains_torsion_relation(const struct StrataPresentation *p,
                                                   uint32_t a,
                                                   uint32_t b,
                                                   uint32_t c,
                                                   bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STRATA_RINGS_H */

#ifndef MENGER_KNOTS_H
#define MENGER_KNOTS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes shared by every entry point.
 */
typedef enum {
  MK_STATUS_OK = 0,
  MK_STATUS_NULL_ARGUMENT = 1,
  MK_STATUS_INVALID_ARGUMENT = 2,
  MK_STATUS_INVALID_KNOT = 3,
  MK_STATUS_DEGENERATE = 4,
  MK_STATUS_PIPELINE_FAILED = 5,
  MK_STATUS_CERTIFICATE_INVALID = 6,
  MK_STATUS_UTF8 = 7,
  MK_STATUS_INTERNAL = 8,
} MkStatus;

/**
 * Opaque handle to a containment certificate.
 */
typedef struct MkCertificate MkCertificate;

/**
 * Opaque handle to a validated cubical knot.
 */
typedef struct MkKnot MkKnot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent error on this thread. The pointer is
 * owned by the library and valid until the next failing call on the same
 * thread.
 */
const char *mk_last_error(void);

/**
 * Parses and validates a knot from the ASCII knot file format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
MkStatus mk_knot_parse(const char *text, MkKnot **out);

/**
 * Releases a knot handle. NULL is ignored.
 *
 * # Safety
 * `knot` must have come from this library and not be freed twice.
 */
void mk_knot_free(MkKnot *knot);

/**
 * Number of edges (= vertices) of the closed knot.
 *
 * # Safety
 * `knot` and `out` must be valid pointers.
 */
MkStatus mk_knot_edge_count(const MkKnot *knot, uintptr_t *out);

/**
 * Scale exponent s: coordinates are integers in [0, 3^s].
 *
 * # Safety
 * `knot` and `out` must be valid pointers.
 */
MkStatus mk_knot_scale_exp(const MkKnot *knot, uintptr_t *out);

/**
 * Fox p-coloring count from a seeded generic projection.
 *
 * # Safety
 * `knot` and `out` must be valid pointers.
 */
MkStatus mk_knot_fox_colorings(const MkKnot *knot, uint64_t prime, uint64_t seed, uint64_t *out);

/**
 * Runs the containment pipeline at the given depth and yields a
 * certificate handle.
 *
 * # Safety
 * `knot` and `out` must be valid pointers.
 */
MkStatus mk_pipeline_run(const MkKnot *knot,
                         uintptr_t target_depth,
                         uint64_t seed,
                         MkCertificate **out);

/**
 * Releases a certificate handle. NULL is ignored.
 *
 * # Safety
 * `cert` must have come from this library and not be freed twice.
 */
void mk_certificate_free(MkCertificate *cert);

/**
 * Parses a certificate from JSON.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
MkStatus mk_certificate_parse(const char *text, MkCertificate **out);

/**
 * Serializes a certificate to JSON. Free the result with `mk_string_free`.
 *
 * # Safety
 * `cert` and `out` must be valid pointers.
 */
MkStatus mk_certificate_to_json(const MkCertificate *cert, char **out);

/**
 * Full independent re-check of a certificate.
 *
 * # Safety
 * `cert` must be a valid pointer.
 */
MkStatus mk_certificate_verify(const MkCertificate *cert);

/**
 * Number of elementary isotopy moves in the certificate log.
 *
 * # Safety
 * `cert` and `out` must be valid pointers.
 */
MkStatus mk_certificate_move_count(const MkCertificate *cert, uintptr_t *out);

/**
 * The isotoped knot, as a new handle.
 *
 * # Safety
 * `cert` and `out` must be valid pointers.
 */
MkStatus mk_certificate_final_knot(const MkCertificate *cert, MkKnot **out);

/**
 * Frees a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must have been returned by this library and not be freed twice.
 */
void mk_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* MENGER_KNOTS_H */

#ifndef DAWK_H
#define DAWK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes shared by every entry point.
typedef enum DawkStatus {
  DAWK_STATUS_OK = 0,
  DAWK_STATUS_NULL_POINTER = 1,
  DAWK_STATUS_INVALID_UTF8 = 2,
  DAWK_STATUS_UNKNOWN_TYPE = 3,
  DAWK_STATUS_UNKNOWN_GENERATOR = 4,
  DAWK_STATUS_PARSE_ERROR = 5,
  DAWK_STATUS_NOT_IN_GROUP = 6,
  DAWK_STATUS_MISMATCHED_TYPE = 7,
  DAWK_STATUS_UNSUPPORTED = 8,
  DAWK_STATUS_BAD_DERIVATION = 9,
  // Any other library error.
  DAWK_STATUS_FAILED = 10,
  // A panic was caught at the boundary.
  DAWK_STATUS_INTERNAL = 11,
} DawkStatus;

// An element in normal form, tied to the rank of the group that made it.
typedef struct DawkElement DawkElement;

// A double affine Weyl group of one affine type.
typedef struct DawkGroup DawkGroup;

// A group presentation.
typedef struct DawkPresentation DawkPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version, as a static string (do not free).
const char *dawk_version(void);

// Message of the last failed call on this thread, or null. Free with
// [`dawk_string_free`].
char *dawk_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void dawk_string_free(char *s);

// Creates the group of a catalog type such as `"A2~1"`.
//
// # Safety
// `type_id` must be a NUL-terminated string; `out` must be writable.
enum DawkStatus dawk_group_new(const char *type_id, struct DawkGroup **out);

// # Safety
// `g` must come from [`dawk_group_new`] (or be null).
void dawk_group_free(struct DawkGroup *g);

// Rank of the finite part, or 0 for a null handle.
//
// # Safety
// `g` must be a live handle or null.
size_t dawk_group_rank(const struct DawkGroup *g);

// Evaluates a word such as `"s01 s02 s03 s1 s2 s1"` (`tau` and inverses allowed).
//
// # Safety
// Pointers must be valid; `word` NUL-terminated.
enum DawkStatus dawk_element_from_word(const struct DawkGroup *g,
                                       const char *word,
                                       struct DawkElement **out);

// `out = a * b`.
//
// # Safety
// Handles must be live; `out` writable.
enum DawkStatus dawk_element_multiply(const struct DawkGroup *g,
                                      const struct DawkElement *a,
                                      const struct DawkElement *b,
                                      struct DawkElement **out);

// `out = a^-1`.
//
// # Safety
// Handles must be live; `out` writable.
enum DawkStatus dawk_element_inverse(const struct DawkGroup *g,
                                     const struct DawkElement *a,
                                     struct DawkElement **out);

// 1 if the element is the identity, 0 if not, -1 for a null handle.
//
// # Safety
// `e` must be a live handle or null.
int32_t dawk_element_is_identity(const struct DawkElement *e);

// 1 if equal, 0 if not, -1 if either handle is null.
//
// # Safety
// Handles must be live or null.
int32_t dawk_element_equal(const struct DawkElement *a, const struct DawkElement *b);

// Normal form as JSON `{"w", "mu", "beta", "c"}`.
//
// # Safety
// `e` must be live; `out_json` writable.
enum DawkStatus dawk_element_to_json(const struct DawkElement *e, char **out_json);

// The matrix `rho(e)` on `V` as JSON rows of rational strings.
//
// # Safety
// Handles must be live; `out_json` writable.
enum DawkStatus dawk_element_rho_json(const struct DawkGroup *g,
                                      const struct DawkElement *e,
                                      char **out_json);

// # Safety
// `e` must come from this library (or be null).
void dawk_element_free(struct DawkElement *e);

// Builds a presentation of the named kind (`"daw"`, `"triple"`, ...).
//
// # Safety
// Pointers must be valid; `kind` NUL-terminated.
enum DawkStatus dawk_presentation_new(const struct DawkGroup *g,
                                      const char *kind,
                                      uint32_t k_bound,
                                      struct DawkPresentation **out);

// Parses the text format.
//
// # Safety
// `text` must be NUL-terminated; `out` writable.
enum DawkStatus dawk_presentation_from_text(const char *text, struct DawkPresentation **out);

// Renders the text format.
//
// # Safety
// `p` must be live; `out_text` writable.
enum DawkStatus dawk_presentation_to_text(const struct DawkPresentation *p, char **out_text);

// # Safety
// `p` must come from this library (or be null).
void dawk_presentation_free(struct DawkPresentation *p);

// Checks every relation under the canonical assignment; writes the report
// and (if `out_passed` is non-null) whether all checks passed.
//
// # Safety
// Handles must be live; `out_json` writable; `out_passed` writable or null.
enum DawkStatus dawk_verify(const struct DawkGroup *g,
                            const struct DawkPresentation *p,
                            size_t jobs,
                            char **out_json,
                            bool *out_passed);

// Searches for a derivation of `lhs = rhs`; `max_nodes == 0` keeps the
// default budget. The report's single check is pass (proved) or unknown.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum DawkStatus dawk_prove(const struct DawkPresentation *p,
                           const char *lhs,
                           const char *rhs,
                           size_t max_nodes,
                           char **out_json,
                           bool *out_passed);

// Runs every property and fixture for one type.
//
// # Safety
// `type_id` NUL-terminated; `out_json` writable; `out_passed` writable or null.
enum DawkStatus dawk_paper_suite(const char *type_id,
                                 uint64_t seed,
                                 size_t jobs,
                                 char **out_json,
                                 bool *out_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DAWK_H */

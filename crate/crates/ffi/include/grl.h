#ifndef GRL_H
#define GRL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GrlStatus {
  GRL_STATUS_OK = 0,
  GRL_STATUS_NULL_ARGUMENT = 1,
  GRL_STATUS_INVALID_UTF8 = 2,
  GRL_STATUS_PARSE_ERROR = 3,
  // The kernel rejected a proof.
  GRL_STATUS_REJECTED = 4,
  // A countermodel was found.
  GRL_STATUS_REFUTED = 5,
  // The search budget ran out.
  GRL_STATUS_UNKNOWN = 6,
  GRL_STATUS_INTERNAL = 7,
} GrlStatus;

// A parsed proof script.
typedef struct GrlProof GrlProof;

// A parsed sequent.
typedef struct GrlSequent GrlSequent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after success.
// The pointer stays valid until the next call on this thread.
const char *grl_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void grl_string_free(char *s);

// Parses a proof script.
//
// # Safety
// `src` must be a NUL-terminated string and `out` writable.
enum GrlStatus grl_proof_parse(const char *src, struct GrlProof **out);

// # Safety
// `p` must be null or a live handle from this library.
void grl_proof_free(struct GrlProof *p);

// Checks a proof. On success writes its height to `height` if non-null.
//
// # Safety
// `p` must be a live handle; `height` null or writable.
enum GrlStatus grl_proof_check(const struct GrlProof *p, size_t *height);

// Writes a cut-free proof of the same end-sequent to `out` and the number
// of reduction steps to `steps` if non-null.
//
// # Safety
// `p` must be a live handle, `out` writable, `steps` null or writable.
enum GrlStatus grl_proof_eliminate_cuts(const struct GrlProof *p,
                                        struct GrlProof **out,
                                        size_t *steps);

// Renders a proof as a script. Release the result with [`grl_string_free`].
//
// # Safety
// `p` must be a live handle and `out` writable.
enum GrlStatus grl_proof_to_string(const struct GrlProof *p, char **out);

// Writes the end-sequent of a proof. Release the result with
// [`grl_string_free`].
//
// # Safety
// `p` must be a live handle and `out` writable.
enum GrlStatus grl_proof_end_sequent(const struct GrlProof *p, char **out);

// Parses a sequent such as `P(#a) => P(#a)`.
//
// # Safety
// `src` must be a NUL-terminated string and `out` writable.
enum GrlStatus grl_sequent_parse(const char *src, struct GrlSequent **out);

// # Safety
// `s` must be null or a live handle from this library.
void grl_sequent_free(struct GrlSequent *s);

// Searches for a proof of `goal`. Zero for `max_depth` or `model_cap`
// selects the default. Returns `GRL_STATUS_OK` with `*proof` set,
// `GRL_STATUS_REFUTED` with `*countermodel` set if non-null, or
// `GRL_STATUS_UNKNOWN`.
//
// # Safety
// `goal` must be a live handle, `proof` writable, `countermodel` null or
// writable.
enum GrlStatus grl_prove(const struct GrlSequent *goal,
                         size_t max_depth,
                         size_t model_cap,
                         struct GrlProof **proof,
                         char **countermodel);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRL_H */

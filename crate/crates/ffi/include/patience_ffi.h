#ifndef PATIENCE_FFI_H
#define PATIENCE_FFI_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `PTC_OK` and `PTC_FAILS` are verdicts; the rest are errors.
 */
typedef enum PtcStatus {
  /**
   * Success, or the relation holds.
   */
  PTC_OK = 0,
  /**
   * The relation fails; the output JSON carries the witness.
   */
  PTC_FAILS = 1,
  PTC_NULL_POINTER = 2,
  PTC_INVALID_UTF8 = 3,
  /**
   * Malformed JSON or rational, or a sequence breaking its invariants.
   */
  PTC_INVALID_INPUT = 4,
  PTC_HORIZON_MISMATCH = 5,
  /**
   * A precondition of the operation does not hold (e.g. `x` does not dominate `y`).
   */
  PTC_PRECONDITION = 6,
  PTC_PANIC = 7,
} PtcStatus;

/**
 * Opaque sequence of exact rationals.
 */
typedef struct PtcSequence PtcSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last error on this thread, or null. Valid until the next
 * failing call on the same thread; do not free.
 */
const char *ptc_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer obtained from this library, not yet freed.
 */
void ptc_string_free(char *s);

/**
 * Parses `{"T": n, "values": ["p/q", ...]}` into a new handle.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum PtcStatus ptc_sequence_parse(const char *json, struct PtcSequence **out);

/**
 * Builds a handle from `len` rational strings such as `"3/4"` or `"-2"`.
 *
 * # Safety
 * `values` must point to `len` nul-terminated strings; `out` must be writable.
 */
enum PtcStatus ptc_sequence_from_strings(const char *const *values,
                                         size_t len,
                                         struct PtcSequence **out);

/**
 * Number of periods, or 0 for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
size_t ptc_sequence_horizon(const struct PtcSequence *seq);

/**
 * The sequence as `{"T": n, "values": [...]}`; null for a null handle.
 *
 * # Safety
 * `seq` must be null or a live handle.
 */
char *ptc_sequence_to_json(const struct PtcSequence *seq);

/**
 * # Safety
 * `seq` must be null or a live handle, which is invalid afterwards.
 */
void ptc_sequence_free(struct PtcSequence *seq);

/**
 * Partial-sum dominance of `x` over `y`. Writes the verdict JSON to
 * `out_json` unless it is null.
 *
 * # Safety
 * Handles must be live; `out_json` must be null or writable.
 */
enum PtcStatus ptc_dominates(const struct PtcSequence *x,
                             const struct PtcSequence *y,
                             char **out_json);

/**
 * `w . x` for a nonnegative decreasing `w`, as a rational string in `out`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum PtcStatus ptc_weighted_sum(const struct PtcSequence *w,
                                const struct PtcSequence *x,
                                char **out);

/**
 * Is `alpha` more patient than `beta`? Verdict JSON (with witness on failure)
 * goes to `out_json` unless it is null.
 *
 * # Safety
 * Handles must be live; `out_json` must be null or writable.
 */
enum PtcStatus ptc_is_more_patient(const struct PtcSequence *alpha,
                                   const struct PtcSequence *beta,
                                   char **out_json);

/**
 * Is `alpha` more serene than `beta`?
 *
 * # Safety
 * Handles must be live; `out_json` must be null or writable.
 */
enum PtcStatus ptc_is_more_serene(const struct PtcSequence *alpha,
                                  const struct PtcSequence *beta,
                                  char **out_json);

/**
 * A verified pair `{"x": .., "y": ..}` refuting patience of `alpha` over
 * `beta`. Returns `PTC_OK` with nothing written when patience holds, and
 * `PTC_FAILS` with the pair otherwise.
 *
 * # Safety
 * Handles must be live; `out_json` must be null or writable.
 */
enum PtcStatus ptc_patience_counterexample(const struct PtcSequence *alpha,
                                           const struct PtcSequence *beta,
                                           char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATIENCE_FFI_H */

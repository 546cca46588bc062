#ifndef COUNTERHEADS_H
#define COUNTERHEADS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum ChStatus {
  CH_STATUS_OK = 0,
  CH_STATUS_NULL_POINTER = 1,
  CH_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or nondeterministic machine file.
   */
  CH_STATUS_PARSE = 3,
  CH_STATUS_INVALID_ARGUMENT = 4,
  CH_STATUS_UNSUPPORTED = 5,
  /**
   * The input is not in the bound or uses symbols outside the alphabet.
   */
  CH_STATUS_BAD_INPUT = 6,
  CH_STATUS_IO = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  CH_STATUS_INTERNAL = 8,
} ChStatus;

typedef enum ChVerdict {
  CH_VERDICT_ACCEPT = 0,
  CH_VERDICT_REJECT = 1,
  CH_VERDICT_TIMEOUT = 2,
  CH_VERDICT_FAULT = 3,
} ChVerdict;

/**
 * Opaque machine handle.
 */
typedef struct ChMachine ChMachine;

typedef struct ChRunSummary {
  enum ChVerdict verdict;
  uint64_t steps;
  /**
   * Largest counter or register value reached; 0 for multi-head automata.
   */
  uint64_t max_counter;
} ChRunSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a JSON machine description into a new handle stored in `*out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum ChStatus ch_machine_load(const char *json, struct ChMachine **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `m` must be null or a handle from [`ch_machine_load`] that was not freed yet.
 */
void ch_machine_free(struct ChMachine *m);

/**
 * Runs the machine on `input` (a decimal number for register machines) for at most
 * `limit` steps.
 *
 * # Safety
 * `m` must be a live handle, `input` a NUL-terminated string, `out` a valid pointer.
 */
enum ChStatus ch_run(const struct ChMachine *m,
                     const char *input,
                     uint64_t limit,
                     struct ChRunSummary *out);

/**
 * Like [`ch_run`] but returns the JSON run report (with trace) in `*out_json`.
 *
 * # Safety
 * As for [`ch_run`]; `*out_json` must later be passed to [`ch_string_free`].
 */
enum ChStatus ch_run_json(const struct ChMachine *m,
                          const char *input,
                          uint64_t limit,
                          char **out_json);

/**
 * Encodes `input` against the comma-separated `bound` words; JSON in `*out_json`.
 *
 * # Safety
 * `bound` and `input` must be NUL-terminated strings, `out_json` a valid pointer.
 */
enum ChStatus ch_encode_json(const char *bound, const char *input, char **out_json);

/**
 * Message describing the last failure on this thread, or an empty string. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *ch_last_error(void);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library that was not freed yet.
 */
void ch_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COUNTERHEADS_H */

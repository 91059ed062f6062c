#ifndef STARKRANKIN_H
#define STARKRANKIN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The first five agree with the command-line exit codes.
 */
typedef enum SrStatus {
  SR_STATUS_OK = 0,
  /**
   * Resource or internal error.
   */
  SR_STATUS_OTHER = 1,
  /**
   * The computation ran and at least one check failed.
   */
  SR_STATUS_CHECK_FAILED = 2,
  /**
   * Vanishing fudge factor, missing square root or precision loss.
   */
  SR_STATUS_DEGENERATE = 3,
  /**
   * Malformed or unsupported input.
   */
  SR_STATUS_INVALID = 4,
  SR_STATUS_NULL_POINTER = 5,
  SR_STATUS_INVALID_UTF8 = 6,
  SR_STATUS_PANIC = 7,
} SrStatus;

/**
 * A validated scenario.
 */
typedef struct SrScenario SrScenario;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates a scenario given as JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrStatus sr_scenario_from_json(const char *json, struct SrScenario **out);

/**
 * Reads, parses and validates a scenario file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SrStatus sr_scenario_from_path(const char *path, struct SrScenario **out);

/**
 * Releases a scenario. Null is ignored.
 *
 * # Safety
 * `sc` must come from `sr_scenario_from_*` and not have been freed.
 */
void sr_scenario_free(struct SrScenario *sc);

/**
 * Runs a command ("classgroup", "theta", "eisenstein", "verify-factors",
 * "lambda", "recover", "all") and writes its JSON report to `*report`.
 * `sc` may be null for commands that do not need a scenario. `seed` may be
 * null to use the scenario seed. The report is written even when the status
 * is not `Ok`.
 *
 * # Safety
 * `command` must be a NUL-terminated string, `report` a valid pointer, `sc`
 * null or a live handle, `seed` null or valid.
 */
enum SrStatus sr_run(const struct SrScenario *sc,
                     const char *command,
                     const uint64_t *seed,
                     char **report);

/**
 * Writes λ of the scenario, rendered exactly (e.g. "25/6"), to `*value`.
 *
 * # Safety
 * `sc` must be a live handle and `value` a valid pointer.
 */
enum SrStatus sr_lambda(const struct SrScenario *sc, char **value);

/**
 * Writes λ embedded in Q_p at the scenario precision, as a p-adic digit
 * expansion, to `*value`.
 *
 * # Safety
 * `sc` must be a live handle and `value` a valid pointer.
 */
enum SrStatus sr_lambda_padic(const struct SrScenario *sc, char **value);

/**
 * Class number of the imaginary quadratic order of discriminant `disc` < 0.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum SrStatus sr_class_number(int64_t disc, uint64_t *out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void sr_string_free(char *s);

/**
 * Message for the last failing call on this thread, or "" after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *sr_last_error(void);

/**
 * Library version, a static string.
 */
const char *sr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STARKRANKIN_H */

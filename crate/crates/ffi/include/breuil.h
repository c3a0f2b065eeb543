#ifndef BREUIL_H
#define BREUIL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BrStatus {
  BR_STATUS_OK = 0,
  /**
   * The computation ran and some check failed.
   */
  BR_STATUS_CHECK_FAILED = 1,
  BR_STATUS_INVALID_INPUT = 2,
  BR_STATUS_NULL_POINTER = 3,
  /**
   * A library operation failed on valid input.
   */
  BR_STATUS_MATH_ERROR = 4,
  /**
   * A caller-supplied buffer is too short.
   */
  BR_STATUS_BUFFER_TOO_SMALL = 5,
  BR_STATUS_PANIC = 6,
} BrStatus;

/**
 * A cyclic simple object over `GF(p)` with `E(u) = u^e − p`.
 */
typedef struct BrSimple BrSimple;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the cyclic simple object with the given `d` weights.
 *
 * # Safety
 * `weights` must point to `d` readable values and `out` must be writable.
 */
enum BrStatus br_simple_new(uint32_t p,
                            uint32_t e,
                            uint32_t r,
                            const uint32_t *weights,
                            size_t d,
                            struct BrSimple **out);

/**
 * # Safety
 * `s` must come from [`br_simple_new`] and not be used afterwards. Null is ignored.
 */
void br_simple_free(struct BrSimple *s);

/**
 * Rank of the object.
 *
 * # Safety
 * `s` must be a live handle or null.
 */
size_t br_simple_rank(const struct BrSimple *s);

/**
 * Writes `s_i` and `t_i` (`len ≥ d` entries each) and `v`.
 *
 * # Safety
 * `s` must be a live handle; `s_out`, `t_out` must hold `len` values; `v_out` must be writable.
 */
enum BrStatus br_simple_weights(const struct BrSimple *s,
                                uint64_t *s_out,
                                uint64_t *t_out,
                                size_t len,
                                uint64_t *v_out);

/**
 * Exponent of the fundamental character and the order `p^d` of its group.
 *
 * # Safety
 * `s` must be a live handle; both outputs must be writable.
 */
enum BrStatus br_simple_character(const struct BrSimple *s,
                                  uint64_t *exponent,
                                  uint64_t *group_order);

/**
 * `BR_STATUS_OK` when every module axiom holds, `BR_STATUS_CHECK_FAILED` otherwise.
 *
 * # Safety
 * `s` must be a live handle.
 */
enum BrStatus br_simple_validate(const struct BrSimple *s);

/**
 * Checks that every base-p digit of a level-`h` character lies in `[0, er]`.
 *
 * # Safety
 * `digits` must point to `h` readable values.
 */
enum BrStatus br_serre_check(uint32_t p, const uint32_t *digits, size_t h, uint32_t e, uint32_t r);

/**
 * Runs a CLI command on a JSON jobfile; the report goes to `*report`.
 *
 * # Safety
 * `command` and `jobfile` must be NUL-terminated strings; `report` must be writable.
 */
enum BrStatus br_run_json(const char *command, const char *jobfile, bool as_json, char **report);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards. Null is ignored.
 */
void br_string_free(char *s);

/**
 * Message of the last failing call on this thread, or null. Owned by the library.
 */
const char *br_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BREUIL_H */

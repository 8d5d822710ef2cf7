#ifndef ODDLIBM_H
#define ODDLIBM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Rounding mode codes accepted by [`oddlibm_evaluate`].
 */
#define ODDLIBM_RN 0

#define ODDLIBM_RA 1

#define ODDLIBM_RZ 2

#define ODDLIBM_RU 3

#define ODDLIBM_RD 4

/**
 * Status of a call. Zero is success.
 */
typedef enum OddlibmStatus {
  ODDLIBM_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  ODDLIBM_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  ODDLIBM_STATUS_INVALID_UTF8 = 2,
  /**
   * The artifact file could not be read.
   */
  ODDLIBM_STATUS_IO = 3,
  /**
   * The artifact text is malformed.
   */
  ODDLIBM_STATUS_PARSE = 4,
  /**
   * The target width is outside `ebits + 2 ..= n`.
   */
  ODDLIBM_STATUS_UNSUPPORTED_TARGET = 5,
  /**
   * Unknown rounding mode, or round-to-odd where a standard mode is required.
   */
  ODDLIBM_STATUS_INVALID_MODE = 6,
  /**
   * Verification found at least one incorrectly rounded result.
   */
  ODDLIBM_STATUS_VERIFICATION_FAILED = 7,
  /**
   * Any other failure, including a caught panic.
   */
  ODDLIBM_STATUS_INTERNAL = 8,
} OddlibmStatus;

/**
 * Opaque handle to a loaded function.
 */
typedef struct OddlibmFunction OddlibmFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads an artifact file. On success `*out` owns a new handle.
 *
 * # Safety
 * `path` must be a nul-terminated string and `out` writable.
 */
enum OddlibmStatus oddlibm_load(const char *path, struct OddlibmFunction **out);

/**
 * Loads an artifact from its text. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum OddlibmStatus oddlibm_load_str(const char *text, struct OddlibmFunction **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void oddlibm_free(struct OddlibmFunction *f);

/**
 * Correctly rounded `f(x)` in `F(k, ebits)` under `mode` (an `ODDLIBM_R*`
 * code). `x` holds a `k`-bit pattern.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum OddlibmStatus oddlibm_evaluate(const struct OddlibmFunction *f,
                                    uint64_t x,
                                    uint32_t k,
                                    uint32_t mode,
                                    uint64_t *out);

/**
 * Round-to-odd result in `F(n + 2, ebits)` for an `n`-bit input pattern.
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum OddlibmStatus oddlibm_evaluate_rno(const struct OddlibmFunction *f, uint64_t x, uint64_t *out);

/**
 * Design format `F(n, ebits)` and the supported target widths `k_min..=k_max`.
 *
 * # Safety
 * `f` must be a live handle; every output pointer must be writable.
 */
enum OddlibmStatus oddlibm_format(const struct OddlibmFunction *f,
                                  uint32_t *n,
                                  uint32_t *ebits,
                                  uint32_t *k_min,
                                  uint32_t *k_max);

/**
 * Function name such as `ln`, owned by the handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
const char *oddlibm_function_name(const struct OddlibmFunction *f);

/**
 * Exhaustively checks every target and mode; `*all_pass` is 1 when every
 * result is correctly rounded. Returns `VerificationFailed` otherwise.
 *
 * # Safety
 * `f` must be a live handle and `all_pass` writable.
 */
enum OddlibmStatus oddlibm_verify(const struct OddlibmFunction *f, int32_t *all_pass);

/**
 * Message of the last failing call on this thread; empty if none. Valid
 * until the next failing call on the same thread.
 */
const char *oddlibm_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ODDLIBM_H */

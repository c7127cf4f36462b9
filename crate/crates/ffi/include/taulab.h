#ifndef TAULAB_H
#define TAULAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum TaulabStatus {
  TAULAB_STATUS_OK = 0,
  TAULAB_STATUS_NULL_POINTER = 1,
  TAULAB_STATUS_UTF8 = 2,
  TAULAB_STATUS_INVALID_ARGUMENT = 3,
  TAULAB_STATUS_OUT_OF_RANGE = 4,
  TAULAB_STATUS_PARSE = 5,
  TAULAB_STATUS_VERSION = 6,
  TAULAB_STATUS_GUARD = 7,
  TAULAB_STATUS_INVARIANT = 8,
  TAULAB_STATUS_SAMPLING = 9,
  TAULAB_STATUS_PANIC = 10,
} TaulabStatus;

/**
 * Opaque instance handle.
 */
typedef struct TaulabInstance TaulabInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *taulab_last_error(void);

/**
 * Library version as a static string.
 */
const char *taulab_version(void);

/**
 * Samples an instance. `prime_width = 0` selects the default width.
 *
 * # Safety
 * `out` must be valid for writing one pointer.
 */
enum TaulabStatus taulab_construct(uint32_t n,
                                   uint64_t seed,
                                   uint32_t prime_width,
                                   struct TaulabInstance **out);

/**
 * Releases an instance; null is ignored.
 *
 * # Safety
 * `p` must come from this library and not be used afterwards.
 */
void taulab_instance_free(struct TaulabInstance *p);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void taulab_string_free(char *s);

/**
 * Security parameter of an instance.
 *
 * # Safety
 * `tau` must be a live instance and `out` writable.
 */
enum TaulabStatus taulab_instance_n(const struct TaulabInstance *tau, uint32_t *out);

/**
 * Writes the taulab-1 text of an instance.
 *
 * # Safety
 * `tau` must be a live instance and `out` writable.
 */
enum TaulabStatus taulab_serialize(const struct TaulabInstance *tau, char **out);

/**
 * Parses and validates taulab-1 text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` writable.
 */
enum TaulabStatus taulab_deserialize(const char *text, struct TaulabInstance **out);

/**
 * Evaluates an instance with `n <= 64`.
 *
 * # Safety
 * `tau` must be a live instance and `y` writable.
 */
enum TaulabStatus taulab_evaluate_u64(const struct TaulabInstance *tau, uint64_t x, uint64_t *y);

/**
 * Evaluates at `x` given in decimal or 0x-hex; `y` receives 0x-hex padded
 * to `n/4` digits.
 *
 * # Safety
 * `tau` must be a live instance, `x` a nul-terminated string, `y` writable.
 */
enum TaulabStatus taulab_evaluate_str(const struct TaulabInstance *tau, const char *x, char **y);

/**
 * Number of preimages of `y` by exhaustive search, under the default guards
 * as raised by `TAULAB_MAX_N`.
 *
 * # Safety
 * `tau` must be a live instance and `count` writable.
 */
enum TaulabStatus taulab_preimage_count(const struct TaulabInstance *tau,
                                        uint64_t y,
                                        uint64_t *count);

/**
 * DIMACS text of the Tseitin CNF. `fixed_y` may be null; otherwise the
 * outputs are pinned to it (decimal or 0x-hex). The prime-width guard
 * applies.
 *
 * # Safety
 * `tau` must be a live instance, `fixed_y` null or a nul-terminated string,
 * `out` writable.
 */
enum TaulabStatus taulab_emit_dimacs(const struct TaulabInstance *tau,
                                     const char *fixed_y,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TAULAB_H */

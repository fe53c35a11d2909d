#ifndef FILTK_H
#define FILTK_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * `filtk_space_classify` flag bits.
 */
#define FILTK_UNIQUE_PATH 1

#define FILTK_EBP 2

#define FILTK_ACCORDION 4

#define FILTK_FOREST 8

/**
 * Result of a call.
 */
typedef enum FiltkStatus {
  FILTK_STATUS_OK = 0,
  FILTK_STATUS_NULL_POINTER = 1,
  FILTK_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or an invalid space or module description.
   */
  FILTK_STATUS_INVALID_INPUT = 3,
  /**
   * A precondition of the operation fails: unique paths, EBP, exactness,
   * freeness or applicability.
   */
  FILTK_STATUS_PRECONDITION = 4,
  /**
   * An internal consistency check failed or the library panicked.
   */
  FILTK_STATUS_INTERNAL = 5,
} FiltkStatus;

/**
 * Opaque module of any kind, with an optional unit.
 */
typedef struct FiltkModule FiltkModule;

/**
 * Opaque finite T0-space.
 */
typedef struct FiltkSpace FiltkSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call.
 */
const char *filtk_last_error(void);

/**
 * Library version as a static string.
 */
const char *filtk_version(void);

void filtk_string_free(char *s);

/**
 * Parses a space from `{"points": [...], "covers": [[upper, lower], ...]}`.
 */
enum FiltkStatus filtk_space_from_json(const char *json, struct FiltkSpace **out);

void filtk_space_free(struct FiltkSpace *space);

/**
 * Number of points, or 0 for a null handle.
 */
size_t filtk_space_len(const struct FiltkSpace *space);

/**
 * Class flags (`FILTK_UNIQUE_PATH` and friends) and the number of locally
 * closed subsets, including the empty set. Either output may be null.
 */
enum FiltkStatus filtk_space_classify(const struct FiltkSpace *space,
                                      uint32_t *flags,
                                      size_t *lc_count);

/**
 * Parses a module file. The space must be given inline.
 */
enum FiltkStatus filtk_module_from_json(const char *json, struct FiltkModule **out);

void filtk_module_free(struct FiltkModule *module);

/**
 * Serializes a module; release the result with `filtk_string_free`.
 */
enum FiltkStatus filtk_module_to_json(const struct FiltkModule *module, char **out);

/**
 * Relation, exactness and (for ST-modules) real-rank-zero-like checks.
 * Each output receives 1 or 0 and may be null; `rrz` is 1 for non-ST kinds.
 */
enum FiltkStatus filtk_module_check(const struct FiltkModule *module,
                                    int *valid,
                                    int *exact,
                                    int *rrz);

/**
 * Rebuilds the ST-module of an exact B-module over an EBP space.
 */
enum FiltkStatus filtk_module_extend(const struct FiltkModule *module, struct FiltkModule **out);

/**
 * Restricts an ST-module to the given kind: 0 = ST, 1 = B, 2 = R, 3 = TB.
 */
enum FiltkStatus filtk_module_restrict(const struct FiltkModule *module,
                                       int kind,
                                       struct FiltkModule **out);

/**
 * Range criteria for an R-module (ST input is restricted first). With
 * `unital` nonzero the unital criteria are evaluated. `realizable`
 * receives the graph verdict (unital or not); `verdict_json`, if not null,
 * the full verdict.
 */
enum FiltkStatus filtk_module_range_check(const struct FiltkModule *module,
                                          int unital,
                                          int *realizable,
                                          char **verdict_json);

/**
 * Phantom criteria for a pointed ST- or B-module over an accordion space.
 * A missing unit is taken to be zero.
 */
enum FiltkStatus filtk_module_phantom(const struct FiltkModule *module,
                                      int *satisfied,
                                      char **verdict_json);

/**
 * Same as `filtk_module_extend` but through the full ST round trip: the
 * ST-module is restricted to B and rebuilt.
 */
enum FiltkStatus filtk_module_rebuild(const struct FiltkModule *module, struct FiltkModule **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FILTK_H */

#ifndef CHERRYPICK_H
#define CHERRYPICK_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  CP_STATUS_NULL_ARGUMENT = 1,
  CP_STATUS_INVALID_UTF8 = 2,
  CP_STATUS_PARSE = 3,
  CP_STATUS_LABEL_MISMATCH = 4,
  CP_STATUS_BUDGET_EXHAUSTED = 5,
  CP_STATUS_INVALID_TRACE = 6,
  CP_STATUS_NETWORK = 7,
  CP_STATUS_SCALE_GUARD = 8,
  CP_STATUS_PANIC = 9,
} CpStatus;

typedef struct CpForest CpForest;

typedef struct CpNetwork CpNetwork;

typedef struct CpTrace CpTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Free with
 * [`cp_string_free`].
 */
char *cp_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cp_string_free(char *s);

/**
 * Parses a forest document, one Newick tree per line.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum CpStatus cp_forest_parse(const char *text, struct CpForest **out);

/**
 * # Safety
 * `f` must come from this library and not have been freed.
 */
void cp_forest_free(struct CpForest *f);

/**
 * Canonical Newick text of `f`. Free with [`cp_string_free`].
 *
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum CpStatus cp_forest_to_string(const struct CpForest *f, char **out);

/**
 * Number of leaves of `f`, or 0 for NULL.
 *
 * # Safety
 * `f` must be NULL or a live handle.
 */
uintptr_t cp_forest_label_count(const struct CpForest *f);

/**
 * Parses an edge-list network document. Multi-edges are rejected.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum CpStatus cp_network_parse(const char *text, struct CpNetwork **out);

/**
 * # Safety
 * `n` must come from this library and not have been freed.
 */
void cp_network_free(struct CpNetwork *n);

/**
 * Edge-list text of `n`. Free with [`cp_string_free`].
 *
 * # Safety
 * `n` must be a live handle and `out` writable.
 */
enum CpStatus cp_network_to_string(const struct CpNetwork *n, char **out);

/**
 * Reticulation number of `n`, or 0 for NULL.
 *
 * # Safety
 * `n` must be NULL or a live handle.
 */
uintptr_t cp_network_reticulation_number(const struct CpNetwork *n);

/**
 * Parses a JSON trace document. Steps are checked against their rule but
 * not replayed.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
enum CpStatus cp_trace_parse(const char *text, struct CpTrace **out);

/**
 * # Safety
 * `t` must come from this library and not have been freed.
 */
void cp_trace_free(struct CpTrace *t);

/**
 * JSON text of `t`. Free with [`cp_string_free`].
 *
 * # Safety
 * `t` must be a live handle and `out` writable.
 */
enum CpStatus cp_trace_to_string(const struct CpTrace *t, char **out);

/**
 * Hybrid number of two forests on the same leaves. `budget` of 0 means no
 * limit; when the budget runs out the status is `BudgetExhausted` and
 * `weight` receives the best upper bound found. `trace` may be NULL;
 * otherwise it receives the witness.
 *
 * # Safety
 * `f1` and `f2` must be live handles, `weight` writable, and `trace` NULL
 * or writable.
 */
enum CpStatus cp_hybrid_number(const struct CpForest *f1,
                               const struct CpForest *f2,
                               uint64_t budget,
                               uintptr_t threads,
                               uintptr_t *weight,
                               struct CpTrace **trace);

/**
 * A valid, not necessarily optimal, trace.
 *
 * # Safety
 * `f1` and `f2` must be live handles and `out` writable.
 */
enum CpStatus cp_greedy_trace(const struct CpForest *f1,
                              const struct CpForest *f2,
                              struct CpTrace **out);

/**
 * Replays `t` on the two forests and writes its weight.
 *
 * # Safety
 * All handles must be live and `weight` writable.
 */
enum CpStatus cp_validate_trace(const struct CpForest *f1,
                                const struct CpForest *f2,
                                const struct CpTrace *t,
                                uintptr_t *weight);

/**
 * Builds a network displaying both forests from a valid trace.
 *
 * # Safety
 * All handles must be live and `out` writable.
 */
enum CpStatus cp_build_network(const struct CpForest *f1,
                               const struct CpForest *f2,
                               const struct CpTrace *t,
                               struct CpNetwork **out);

/**
 * Writes whether `n` displays `f`.
 *
 * # Safety
 * Both handles must be live and `result` writable.
 */
enum CpStatus cp_displays(const struct CpNetwork *n, const struct CpForest *f, bool *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHERRYPICK_H */

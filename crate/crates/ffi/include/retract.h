/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef RETRACT_H
#define RETRACT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RetractStatus {
  RETRACT_STATUS_OK = 0,
  RETRACT_STATUS_NULL_ARGUMENT = 1,
  RETRACT_STATUS_INVALID_UTF8 = 2,
  RETRACT_STATUS_PARSE_ERROR = 3,
  RETRACT_STATUS_INVALID_POSET = 4,
  RETRACT_STATUS_UNKNOWN_POINT = 5,
  /**
   * The pattern does not satisfy the preconditions of the operation.
   */
  RETRACT_STATUS_BAD_PATTERN = 6,
  RETRACT_STATUS_INTERNAL = 7,
} RetractStatus;

typedef enum RetractGraph {
  RETRACT_GRAPH_BUNDLES = 0,
  RETRACT_GRAPH_PATTERN = 1,
  RETRACT_GRAPH_PATTERN_MAX = 2,
} RetractGraph;

/**
 * Opaque poset handle.
 */
typedef struct RetractPoset RetractPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a poset in the text file format.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
enum RetractStatus retract_poset_parse(const char *text, struct RetractPoset **out);

/**
 * Builds a poset on `point_count` points from `edge_count` pairs
 * `edges[2k] < edges[2k+1]`, closed transitively.
 *
 * # Safety
 * `edges` must hold `2 * edge_count` values (or be null when the count is
 * zero) and `out` must be a valid pointer.
 */
enum RetractStatus retract_poset_from_edges(size_t point_count,
                                            const size_t *edges,
                                            size_t edge_count,
                                            struct RetractPoset **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `poset` must come from this library and not be used afterwards.
 */
void retract_poset_free(struct RetractPoset *poset);

/**
 * Number of points, or 0 for a null handle.
 *
 * # Safety
 * `poset` must be null or a live handle.
 */
size_t retract_poset_point_count(const struct RetractPoset *poset);

/**
 * Minimal and maximal points as bit masks (bit `x` set for point `x`).
 *
 * # Safety
 * `poset` must be a live handle; `lower` and `upper` valid pointers.
 */
enum RetractStatus retract_poset_levels(const struct RetractPoset *poset,
                                        uint64_t *lower,
                                        uint64_t *upper);

/**
 * Decides whether the given minimal and maximal points form a retract.
 * On success `*is_retract` is set; when it is true and `map` is not null,
 * the retraction is written to `map[0..point_count]`.
 *
 * # Safety
 * Arrays must hold the stated number of ids; `map` must be null or hold
 * one slot per point.
 */
enum RetractStatus retract_decide(const struct RetractPoset *poset,
                                  const size_t *lower,
                                  size_t lower_len,
                                  const size_t *upper,
                                  size_t upper_len,
                                  bool *is_retract,
                                  size_t *map);

/**
 * The analysis report as JSON. Release with `retract_string_free`.
 *
 * # Safety
 * `poset` must be a live handle and `out` a valid pointer.
 */
enum RetractStatus retract_analyze_json(const struct RetractPoset *poset, char **out);

/**
 * A multigraph in DOT. The pattern arrays are ignored for
 * `RETRACT_GRAPH_BUNDLES`. Release with `retract_string_free`.
 *
 * # Safety
 * As for `retract_decide`; `out` must be a valid pointer.
 */
enum RetractStatus retract_graph_dot(const struct RetractPoset *poset,
                                     enum RetractGraph which,
                                     const size_t *lower,
                                     size_t lower_len,
                                     const size_t *upper,
                                     size_t upper_len,
                                     char **out);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void retract_string_free(char *s);

/**
 * Static description of a status code.
 */
const char *retract_status_message(enum RetractStatus status);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *retract_last_error_message(void);

/**
 * Largest supported number of points.
 */
size_t retract_max_points(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RETRACT_H */

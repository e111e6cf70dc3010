/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef TRIMCOLOR_H
#define TRIMCOLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Pass as `delta` to use the library default.
#define TC_DEFAULT_DELTA 0

typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_UTF8 = 2,
  TC_STATUS_PARSE = 3,
  TC_STATUS_CONTRACT = 4,
  TC_STATUS_RESOURCE = 5,
  TC_STATUS_BUDGET = 6,
  TC_STATUS_INTERNAL = 7,
  TC_STATUS_IO = 8,
  TC_STATUS_BUFFER_TOO_SMALL = 9,
  TC_STATUS_PANIC = 10,
} TcStatus;

typedef enum TcDecideAlgorithm {
  TC_DECIDE_ALGORITHM_BHK = 0,
  TC_DECIDE_ALGORITHM_TRIMMED = 1,
  TC_DECIDE_ALGORITHM_BOUNDED = 2,
} TcDecideAlgorithm;

typedef enum TcColorAlgorithm {
  TC_COLOR_ALGORITHM_BHK = 0,
  TC_COLOR_ALGORITHM_TRIMMED = 1,
  TC_COLOR_ALGORITHM_REDUCTION = 2,
  TC_COLOR_ALGORITHM_A3 = 3,
} TcColorAlgorithm;

// Opaque graph handle; create with `tc_graph_new` or `tc_graph_from_dimacs`,
// release with `tc_graph_free`.
typedef struct TcGraph TcGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// Valid until the next `tc_*` call on the same thread.
const char *tc_last_error(void);

// Library version as a static NUL-terminated string.
const char *tc_version(void);

// Edgeless graph on `n` vertices.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum TcStatus tc_graph_new(size_t n, struct TcGraph **out);

// Parses DIMACS `.col` text.
//
// # Safety
// `text` must be NUL-terminated; `out` must be valid for one write.
enum TcStatus tc_graph_from_dimacs(const char *text, struct TcGraph **out);

// # Safety
// `g` must be null or a handle from this library not yet freed.
void tc_graph_free(struct TcGraph *g);

// Adds the undirected edge `{u, v}`; 0-based, no loops.
//
// # Safety
// `g` must be a live handle.
enum TcStatus tc_graph_add_edge(struct TcGraph *g, size_t u, size_t v);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t tc_graph_vertex_count(const struct TcGraph *g);

// # Safety
// `g` must be null or a live handle.
size_t tc_graph_edge_count(const struct TcGraph *g);

// Decides k-colorability; `delta` of `TC_DEFAULT_DELTA` picks the default.
//
// # Safety
// `g` must be a live handle and `out` valid for one write.
enum TcStatus tc_decide(const struct TcGraph *g,
                        size_t k,
                        enum TcDecideAlgorithm algorithm,
                        size_t delta,
                        bool *out);

// # Safety
// `g` must be a live handle and `out` valid for one write.
enum TcStatus tc_chromatic_number(const struct TcGraph *g, size_t *out);

// Searches for a proper k-coloring. On success `*found` says whether one
// exists; if so, `colors[0..n)` holds it. `seed` only affects `A3`.
//
// # Safety
// `g` must be a live handle, `found` valid for one write, and `colors`
// valid for `len` writes.
enum TcStatus tc_color(const struct TcGraph *g,
                       size_t k,
                       enum TcColorAlgorithm algorithm,
                       uint64_t seed,
                       uint32_t *colors,
                       size_t len,
                       bool *found);

// List coloring. Vertex `v` may use `palette[offsets[v]..offsets[v+1])`,
// so `offsets` has `n + 1` entries.
//
// # Safety
// `g` must be a live handle; `offsets` must hold `n + 1` entries and
// `palette` at least `offsets[n]`; `out` valid for one write.
enum TcStatus tc_list_color(const struct TcGraph *g,
                            const size_t *offsets,
                            const uint32_t *palette,
                            bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRIMCOLOR_H */

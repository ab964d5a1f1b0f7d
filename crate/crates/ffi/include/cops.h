#ifndef COPS_H
#define COPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum CopsStatus {
  COPS_STATUS_OK = 0,
  COPS_STATUS_NULL_POINTER = 1,
  COPS_STATUS_INVALID_ARGUMENT = 2,
  COPS_STATUS_PARSE = 3,
  COPS_STATUS_BUDGET_EXCEEDED = 4,
  COPS_STATUS_IO = 5,
  // The quantity is undefined for this input, e.g. girth of a forest.
  COPS_STATUS_UNDEFINED = 6,
  COPS_STATUS_PANIC = 7,
} CopsStatus;

// How a game played through [`cops_play`] ended.
typedef enum CopsOutcome {
  COPS_OUTCOME_CAUGHT = 0,
  COPS_OUTCOME_EVADED = 1,
  COPS_OUTCOME_ABORTED = 2,
} CopsOutcome;

// Opaque graph handle.
typedef struct CopsGraph CopsGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *cops_last_error(void);

// Library version as a static nul-terminated string.
const char *cops_version(void);

// Builds a graph on `n` vertices from `m` edges stored as `2m` endpoints.
//
// # Safety
// `edges` must point to `2 * m` readable values (it may be null when
// `m == 0`) and `out` must be writable.
enum CopsStatus cops_graph_from_edges(size_t n,
                                      const uint32_t *edges,
                                      size_t m,
                                      struct CopsGraph **out);

// Parses the edge-list text format: a header `n m`, then one `u v` per line.
//
// # Safety
// `text` must be nul-terminated and `out` writable.
enum CopsStatus cops_graph_parse(const char *text, struct CopsGraph **out);

// Loads a named fixture such as `petersen`.
//
// # Safety
// `name` must be nul-terminated and `out` writable.
enum CopsStatus cops_graph_fixture(const char *name, struct CopsGraph **out);

// Samples `G(n, p)` from `seed`.
//
// # Safety
// `out` must be writable.
enum CopsStatus cops_graph_gnp(size_t n, double p, uint64_t seed, struct CopsGraph **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `g` must come from this library and not be used afterwards.
void cops_graph_free(struct CopsGraph *g);

// Vertex and edge counts.
//
// # Safety
// `g` must be a live handle; `n` and `m` writable.
enum CopsStatus cops_graph_size(const struct CopsGraph *g, size_t *n, size_t *m);

// Length of a shortest cycle; [`CopsStatus::Undefined`] for forests.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum CopsStatus cops_graph_girth(const struct CopsGraph *g, size_t *out);

// Exact cop number, searching `k = 1..=k_max`. Budgets come from the
// `COPS_STATE_BUDGET` and `COPS_TRANSITION_BUDGET` environment variables.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum CopsStatus cops_cop_number(const struct CopsGraph *g, size_t k_max, size_t *out);

// Minimum degree lower bound for graphs of girth at least five;
// [`CopsStatus::Undefined`] when the girth is smaller.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum CopsStatus cops_girth5_bound(const struct CopsGraph *g, size_t *out);

// Lower bound on the cop number of `G(n, p)`.
//
// # Safety
// `out` must be writable.
enum CopsStatus cops_gnp_lower(double n, double p, double *out);

// Upper bound on the cop number of `G(n, p)` for `eps` in (0, 1).
//
// # Safety
// `out` must be writable.
enum CopsStatus cops_gnp_upper(double n, double p, double eps, double *out);

// Plays one game between named strategies such as `"greedy:k=2"` and
// `"walkweight"`. `max_rounds == 0` selects the default cutoff. On success
// `outcome` and `rounds` describe the result; `rounds` is the capture round
// or the number of rounds played.
//
// # Safety
// `g` must be a live handle, the strings nul-terminated, and the outputs
// writable.
enum CopsStatus cops_play(const struct CopsGraph *g,
                          const char *cops,
                          const char *robber,
                          uint64_t seed,
                          size_t max_rounds,
                          enum CopsOutcome *outcome,
                          size_t *rounds);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COPS_H */

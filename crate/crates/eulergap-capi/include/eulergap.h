#ifndef EULERGAP_H
#define EULERGAP_H

/* Generated by cbindgen from eulergap-capi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Call outcome; nonzero values match the CLI exit codes.
 */
typedef enum {
  EG_STATUS_OK = 0,
  EG_STATUS_INTERNAL = 1,
  EG_STATUS_INVALID = 2,
  EG_STATUS_NUMERICAL = 3,
  EG_STATUS_INFEASIBLE = 4,
} EgStatus;

/**
 * Capacity mode of the reweighted-gap programs.
 */
typedef enum {
  EG_MODE_VERTEX = 0,
  EG_MODE_EDGE = 1,
} EgMode;

/**
 * Opaque directed graph handle.
 */
typedef struct EgGraph EgGraph;

/**
 * Opaque hypergraph handle.
 */
typedef struct EgHypergraph EgHypergraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message for this thread into `buf` (NUL-terminated,
 * truncated to `len`); returns the full message length in bytes.
 *
 * # Safety
 * `buf` must point to `len` writable bytes, or be null (query mode).
 */
size_t eg_last_error(char *buf, size_t len);

/**
 * Parses the edge-list text format (`digraph n m`, then `tail head weight`
 * lines) into a new graph handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
EgStatus eg_graph_parse(const char *text, EgGraph **out);

/**
 * # Safety
 * `g` must be a handle from `eg_graph_parse`, not yet freed.
 */
void eg_graph_free(EgGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t eg_graph_vertex_count(const EgGraph *g);

/**
 * # Safety
 * `g` must be a live graph handle.
 */
size_t eg_graph_edge_count(const EgGraph *g);

/**
 * Directed edge conductance of the subset given as a vertex id array.
 *
 * # Safety
 * `g` live handle; `set` points to `set_len` vertex ids; `out` valid.
 */
EgStatus eg_edge_conductance(const EgGraph *g, const size_t *set, size_t set_len, double *out);

/**
 * Directed vertex expansion; `pi` may be null for uniform weights.
 *
 * # Safety
 * `g` live handle; `pi` null or an array of `n` weights; `out` valid.
 */
EgStatus eg_vertex_expansion(const EgGraph *g,
                             const double *pi,
                             const size_t *set,
                             size_t set_len,
                             double *out);

/**
 * Exhaustive optimum cut (n <= 24); the minimizing subset is returned as a
 * bitmask over vertex ids.
 *
 * # Safety
 * `g` live handle; `pi` null or length-n; out pointers valid.
 */
EgStatus eg_brute_force_cut(const EgGraph *g,
                            EgMode mode,
                            const double *pi,
                            double *out_value,
                            uint64_t *out_mask);

/**
 * Asymmetric ratio; infinity is returned as IEEE positive infinity.
 *
 * # Safety
 * `g` live handle; `pi` null or length-n; `out` valid.
 */
EgStatus eg_asymmetric_ratio(const EgGraph *g, EgMode mode, const double *pi, double *out);

/**
 * Certified bracket for the reweighted spectral gap. `out_converged` is 1
 * when the bracket closed within tolerance.
 *
 * # Safety
 * `g` live handle; `pi` null or length-n; out pointers valid.
 */
EgStatus eg_reweighted_gap(const EgGraph *g,
                           EgMode mode,
                           const double *pi,
                           double tol,
                           size_t max_iters,
                           double *out_lo,
                           double *out_hi,
                           int *out_converged);

/**
 * Full spectral-cut pipeline; returns the cut value, the subset bitmask,
 * and the dual objective certifying value <= 8 * xi.
 *
 * # Safety
 * `g` live handle; `pi` null or length-n; out pointers valid.
 */
EgStatus eg_spectral_cut(const EgGraph *g,
                         EgMode mode,
                         const double *pi,
                         uint64_t seed,
                         size_t ensemble,
                         double *out_value,
                         uint64_t *out_mask,
                         double *out_xi);

/**
 * Parses the hypergraph text format (`hypergraph n m`, then
 * `weight k v1 .. vk` lines).
 *
 * # Safety
 * `text` NUL-terminated; `out` valid.
 */
EgStatus eg_hypergraph_parse(const char *text, EgHypergraph **out);

/**
 * # Safety
 * `h` must be a handle from `eg_hypergraph_parse`, not yet freed.
 */
void eg_hypergraph_free(EgHypergraph *h);

/**
 * Reweighted spectral gap of a hypergraph.
 *
 * # Safety
 * `h` live handle; out pointers valid.
 */
EgStatus eg_hypergraph_gap(const EgHypergraph *h,
                           double tol,
                           size_t max_iters,
                           double *out_lo,
                           double *out_hi,
                           int *out_converged);

/**
 * Certified hypergraph conductance cut.
 *
 * # Safety
 * `h` live handle; out pointers valid.
 */
EgStatus eg_hypergraph_cut(const EgHypergraph *h,
                           uint64_t seed,
                           size_t ensemble,
                           double *out_value,
                           uint64_t *out_mask,
                           double *out_xi);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EULERGAP_H */

/* C interface for the coset-spectra library. */

#ifndef COSET_SPECTRA_H
#define COSET_SPECTRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum CspStatus {
  /**
   * Success.
   */
  CspOk = 0,
  /**
   * A required pointer argument was null.
   */
  CspNullPointer = 1,
  /**
   * Arguments were invalid or unsupported (bad q, forbidden parameter).
   */
  CspInvalidArgument = 2,
  /**
   * A verified mathematical property failed to hold.
   */
  CspPropertyViolation = 3,
  /**
   * Internal failure.
   */
  CspInternal = 4,
} CspStatus;

/**
 * Graph families exposed through the C interface.
 */
typedef enum CspFamily {
  CspFamilyK = 0,
  CspFamilyU = 1,
  CspFamilyA = 2,
  CspFamilyCusp = 3,
} CspFamily;

/**
 * A built graph (opaque).
 */
typedef struct CspGraph CspGraph;

/**
 * A computed spectrum with its certification data (opaque).
 */
typedef struct CspSpectrum CspSpectrum;

/**
 * Field tower for one q (opaque).
 */
typedef struct CspTower CspTower;

/**
 * Bound certification result for one spectrum.
 */
typedef struct CspCertificate {
  /**
   * 1 when every nontrivial eigenvalue fits under 2 sqrt(k-1).
   */
  uint8_t ramanujan;
  /**
   * 1 when every nontrivial eigenvalue fits under 2 sqrt(q).
   */
  uint8_t sqrt_q_bound_holds;
  double max_nontrivial_abs;
  double ramanujan_bound;
  double sqrt_q_bound;
} CspCertificate;

/**
 * Library version as a static string.
 */
const char *csp_version(void);

/**
 * Static description of a status code.
 */
const char *csp_status_message(enum CspStatus status);

/**
 * Build the field tower for an odd prime power q.
 *
 * # Safety
 * `out` must be a valid pointer; the result must be freed with
 * `csp_tower_free`.
 */
enum CspStatus csp_tower_new(uint32_t q, struct CspTower **out);

/**
 * # Safety
 * `tower` must come from `csp_tower_new` and not be used afterwards.
 */
void csp_tower_free(struct CspTower *tower);

/**
 * # Safety
 * `tower` must be a live handle.
 */
uint32_t csp_tower_q(const struct CspTower *tower);

/**
 * # Safety
 * `tower` must be a live handle.
 */
uint32_t csp_tower_p(const struct CspTower *tower);

/**
 * # Safety
 * `tower` must be a live handle.
 */
uint32_t csp_tower_delta(const struct CspTower *tower);

/**
 * Build the graph of `family` at `param` (ignored for cusp graphs).
 *
 * # Safety
 * `tower` must be a live handle and `out` a valid pointer; the result must
 * be freed with `csp_graph_free`.
 */
enum CspStatus csp_graph_build(const struct CspTower *tower,
                               enum CspFamily family,
                               uint32_t param,
                               struct CspGraph **out);

/**
 * # Safety
 * `graph` must come from `csp_graph_build` and not be used afterwards.
 */
void csp_graph_free(struct CspGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle.
 */
uint64_t csp_graph_vertex_count(const struct CspGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle.
 */
uint32_t csp_graph_degree(const struct CspGraph *graph);

/**
 * # Safety
 * `graph` must be a live handle.
 */
uint64_t csp_graph_edge_count(const struct CspGraph *graph);

/**
 * Copy edges as (i, j) pairs into `buf` (2 entries per edge). Returns the
 * number of u32 values required; writes at most `cap` values.
 *
 * # Safety
 * `graph` must be a live handle; `buf` must point to `cap` writable u32
 * slots (or be null when `cap` is 0).
 */
uintptr_t csp_graph_edges(const struct CspGraph *graph, uint32_t *buf, uintptr_t cap);

/**
 * The graph serialized as JSON; free with `csp_string_free`.
 *
 * # Safety
 * `graph` must be a live handle.
 */
char *csp_graph_to_json(const struct CspGraph *graph);

/**
 * Compute all adjacency eigenvalues of the graph.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid pointer; the result must
 * be freed with `csp_spectrum_free`.
 */
enum CspStatus csp_spectrum_compute(const struct CspGraph *graph, struct CspSpectrum **out);

/**
 * # Safety
 * `spectrum` must come from `csp_spectrum_compute` and not be used
 * afterwards.
 */
void csp_spectrum_free(struct CspSpectrum *spectrum);

/**
 * # Safety
 * `spectrum` must be a live handle.
 */
uintptr_t csp_spectrum_len(const struct CspSpectrum *spectrum);

/**
 * Copy eigenvalues (descending) into `buf`; returns the count required.
 *
 * # Safety
 * `spectrum` must be a live handle; `buf` must point to `cap` writable f64
 * slots (or be null when `cap` is 0).
 */
uintptr_t csp_spectrum_values(const struct CspSpectrum *spectrum, double *buf, uintptr_t cap);

/**
 * Certify the eigenvalue bounds of a computed spectrum.
 *
 * # Safety
 * `spectrum` must be a live handle and `out` a valid pointer.
 */
enum CspStatus csp_spectrum_certify(const struct CspSpectrum *spectrum, struct CspCertificate *out);

/**
 * Structural analysis (components, bipartiteness) as JSON; free with
 * `csp_string_free`.
 *
 * # Safety
 * `graph` must be a live handle.
 */
char *csp_graph_analyze_json(const struct CspGraph *graph);

/**
 * The predicted spectrum of a family at one parameter as JSON; free with
 * `csp_string_free`. Not available for cusp graphs.
 *
 * # Safety
 * `tower` must be a live handle and `out` a valid pointer.
 */
enum CspStatus csp_predict_json(const struct CspTower *tower,
                                enum CspFamily family,
                                uint32_t param,
                                char **out);

/**
 * Build, solve, predict, and compare one graph. Returns `CspOk` when the
 * computed and predicted spectra agree within `tol` and the family's
 * eigenvalue bound holds; `CspPropertyViolation` otherwise. The worst
 * matching distance lands in `max_distance` when non-null.
 *
 * # Safety
 * `tower` must be a live handle; `max_distance` may be null.
 */
enum CspStatus csp_crosscheck(const struct CspTower *tower,
                              enum CspFamily family,
                              uint32_t param,
                              double tol,
                              double *max_distance);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void csp_string_free(char *s);

#endif  /* COSET_SPECTRA_H */

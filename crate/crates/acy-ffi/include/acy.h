#ifndef ACY_H
#define ACY_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. Input, math and solver failures use the same
 * numbers as the command-line exit codes.
 */
typedef enum AcyStatus {
  ACY_STATUS_OK = 0,
  ACY_STATUS_INVALID_ARGUMENT = 1,
  ACY_STATUS_INPUT = 2,
  ACY_STATUS_MATH = 3,
  ACY_STATUS_SOLVER = 4,
  ACY_STATUS_PANIC = 5,
} AcyStatus;

/**
 * Which table of a report to read.
 */
typedef enum AcyTable {
  ACY_TABLE_HOCHSCHILD = 0,
  ACY_TABLE_CYCLIC = 1,
  ACY_TABLE_COHOMOLOGY = 2,
} AcyTable;

/**
 * A built algebra together with its graph and cell provenance.
 */
typedef struct AcyAlgebra AcyAlgebra;

/**
 * A finished homology report.
 */
typedef struct AcyReport AcyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after success.
 * Valid until the next call on the same thread.
 */
const char *acy_last_error(void);

/**
 * Library version as a static string.
 */
const char *acy_version(void);

/**
 * Build the algebra of a graph.
 *
 * `graph` is a built-in name such as "A4" or "E8*", or a graph file;
 * `cells` is "builtin", "solve" or a cell/relation file (NULL means
 * "builtin").
 *
 * # Safety
 * `graph` and `cells` must be NULL or NUL-terminated strings; `out` must
 * be a valid pointer to writable storage.
 */
enum AcyStatus acy_algebra_new(const char *graph,
                               const char *cells,
                               uint64_t seed,
                               struct AcyAlgebra **out);

/**
 * # Safety
 * `alg` must be NULL or a handle from [`acy_algebra_new`] not yet freed.
 */
void acy_algebra_free(struct AcyAlgebra *alg);

/**
 * Top degree h - 3 of the algebra.
 *
 * # Safety
 * `alg` must be a live handle.
 */
uint32_t acy_algebra_top_degree(const struct AcyAlgebra *alg);

/**
 * dim A_k; zero above the top degree.
 *
 * # Safety
 * `alg` must be a live handle.
 */
size_t acy_algebra_dim(const struct AcyAlgebra *alg, uint32_t degree);

/**
 * Compute every table and check. `cutoff_degree <= 0` selects 4h;
 * `periods == 0` selects one period (indices 0..=13).
 *
 * # Safety
 * `alg` must be a live handle and `out` a valid pointer.
 */
enum AcyStatus acy_compute(const struct AcyAlgebra *alg,
                           int64_t cutoff_degree,
                           uint32_t periods,
                           struct AcyReport **out);

/**
 * # Safety
 * `rep` must be NULL or a handle from [`acy_compute`] not yet freed.
 */
void acy_report_free(struct AcyReport *rep);

/**
 * Whether every check in the report passed.
 *
 * # Safety
 * `rep` must be a live handle.
 */
bool acy_report_passed(const struct AcyReport *rep);

/**
 * Number of rows (homological indices) in a table.
 *
 * # Safety
 * `rep` must be a live handle.
 */
size_t acy_report_rows(const struct AcyReport *rep, enum AcyTable table);

/**
 * Dimension at (index, total degree), or -1 when the index is not in the
 * table.
 *
 * # Safety
 * `rep` must be a live handle.
 */
int64_t acy_report_dim(const struct AcyReport *rep,
                       enum AcyTable table,
                       size_t index,
                       int64_t degree);

/**
 * The report as "acy-report/1" JSON, owned by the handle.
 *
 * # Safety
 * `rep` must be a live handle; the string dies with it.
 */
const char *acy_report_json(const struct AcyReport *rep);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACY_H */

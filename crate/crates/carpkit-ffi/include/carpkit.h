/* C interface for the carpkit arc routing toolkit. */

#ifndef CARPKIT_H
#define CARPKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible call.
 */
typedef enum CarpStatus {
  CARP_OK = 0,
  CARP_NULL_POINTER = 1,
  CARP_INVALID_UTF8 = 2,
  CARP_PARSE_ERROR = 3,
  CARP_INFEASIBLE = 4,
  CARP_UNSUPPORTED = 5,
  CARP_RUNTIME_ERROR = 6,
} CarpStatus;

/**
 * Cost table selector for `carp_solution_cost`.
 */
typedef enum CarpCostMode {
  CARP_COST_ORIGINAL = 0,
  CARP_COST_DOWN_TRIANGLE = 1,
  CARP_COST_FULL_TRIANGLE = 2,
} CarpCostMode;

/**
 * Opaque instance handle.
 */
typedef struct CarpInstance CarpInstance;

/**
 * Opaque solution handle.
 */
typedef struct CarpSolution CarpSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null.
 * The pointer stays valid until the next toolkit call on the thread.
 */
const char *carp_last_error_message(void);

/**
 * ABI version of this library; bumped on breaking changes.
 */
uint32_t carp_abi_version(void);

/**
 * Parses an instance file.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer; the
 * returned handle must be released with `carp_instance_free`.
 */
enum CarpStatus carp_instance_parse(const char *text, struct CarpInstance **out);

/**
 * Generates a seeded random instance; parameters as in the CLI `gen`.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with
 * `carp_instance_free`.
 */
enum CarpStatus carp_instance_generate(uint64_t seed,
                                       uintptr_t vertices,
                                       double edge_prob,
                                       uint64_t max_cost,
                                       uint64_t max_demand,
                                       uint64_t capacity,
                                       struct CarpInstance **out);

/**
 * Builds the four-city counterexample family instance.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with
 * `carp_instance_free`.
 */
enum CarpStatus carp_instance_fig1(uint64_t ell, uint64_t capacity, struct CarpInstance **out);

/**
 * Writes an instance in the text format.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer; release the
 * string with `carp_string_free`.
 */
enum CarpStatus carp_instance_write(const struct CarpInstance *inst, char **out);

/**
 * # Safety
 * `inst` must be a handle from this library, not yet freed.
 */
void carp_instance_free(struct CarpInstance *inst);

/**
 * Number of vertices; 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uintptr_t carp_instance_vertex_count(const struct CarpInstance *inst);

/**
 * Number of edges; 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uintptr_t carp_instance_edge_count(const struct CarpInstance *inst);

/**
 * Number of positive-demand edges; 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uintptr_t carp_instance_required_count(const struct CarpInstance *inst);

/**
 * Vehicle capacity; 0 for a null handle.
 *
 * # Safety
 * `inst` must be a live handle or null.
 */
uint64_t carp_instance_capacity(const struct CarpInstance *inst);

/**
 * Parses a solution file against an instance.
 *
 * # Safety
 * Pointer arguments as in `carp_instance_parse`; release the handle with
 * `carp_solution_free`.
 */
enum CarpStatus carp_solution_parse(const char *text,
                                    const struct CarpInstance *inst,
                                    struct CarpSolution **out);

/**
 * Writes a solution in the text format.
 *
 * # Safety
 * Handles must be live; release the string with `carp_string_free`.
 */
enum CarpStatus carp_solution_write(const struct CarpSolution *sol,
                                    const struct CarpInstance *inst,
                                    char **out);

/**
 * # Safety
 * `sol` must be a handle from this library, not yet freed.
 */
void carp_solution_free(struct CarpSolution *sol);

/**
 * Number of routes; 0 for a null handle.
 *
 * # Safety
 * `sol` must be a live handle or null.
 */
uintptr_t carp_solution_route_count(const struct CarpSolution *sol);

/**
 * Checks feasibility. Returns `CarpOk` for a feasible solution; for an
 * infeasible one, returns `CarpInfeasible` and, when `report` is
 * non-null, stores one violation per line.
 *
 * # Safety
 * Handles must be live; `report` may be null; release the string with
 * `carp_string_free`.
 */
enum CarpStatus carp_validate(const struct CarpInstance *inst,
                              const struct CarpSolution *sol,
                              char **report);

/**
 * Total solution cost under the chosen cost table. The modified tables
 * are derived on the fly from shortest paths.
 *
 * # Safety
 * Handles and `out` must be valid.
 */
enum CarpStatus carp_solution_cost(const struct CarpInstance *inst,
                                   const struct CarpSolution *sol,
                                   enum CarpCostMode mode,
                                   uint64_t *out);

/**
 * Runs the full pipeline. On success stores the solution handle and,
 * when `report` is non-null, the line-oriented report text.
 *
 * # Safety
 * `inst` must be live, `out` valid; `report` may be null. Release the
 * handle with `carp_solution_free` and the string with
 * `carp_string_free`.
 */
enum CarpStatus carp_solve(const struct CarpInstance *inst,
                           uintptr_t oracle_limit,
                           struct CarpSolution **out,
                           char **report);

/**
 * Computes the exact optimum by brute force. Fails with
 * `CarpUnsupported` above the required-edge limit. `witness` may be null
 * when only the optimum is wanted.
 *
 * # Safety
 * `inst` must be live and `out` valid; release a non-null witness with
 * `carp_solution_free`.
 */
enum CarpStatus carp_solve_exact(const struct CarpInstance *inst,
                                 uintptr_t limit,
                                 uint64_t *out,
                                 struct CarpSolution **witness);

/**
 * Valid lower bound on the optimum of the instance (metric bound plus
 * the reduction saving).
 *
 * # Safety
 * `inst` must be live and `out` valid.
 */
enum CarpStatus carp_lower_bound(const struct CarpInstance *inst, uint64_t *out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void carp_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CARPKIT_H */

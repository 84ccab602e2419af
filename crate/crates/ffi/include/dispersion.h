#ifndef DISPERSION_H
#define DISPERSION_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Error codes returned by every fallible function.
 */
typedef enum DispersionError {
  DISPERSION_ERROR_OK = 0,
  DISPERSION_ERROR_NULL_POINTER = 1,
  DISPERSION_ERROR_INVALID_ARGUMENT = 2,
  DISPERSION_ERROR_PARSE = 3,
  DISPERSION_ERROR_INVALID_INSTANCE = 4,
  DISPERSION_ERROR_IO = 5,
  DISPERSION_ERROR_UTF8 = 6,
  DISPERSION_ERROR_BUFFER_TOO_SMALL = 7,
  DISPERSION_ERROR_PANIC = 8,
} DispersionError;

typedef enum DispersionStatus {
  DISPERSION_STATUS_OPTIMAL = 0,
  DISPERSION_STATUS_FEASIBLE = 1,
  DISPERSION_STATUS_INFEASIBLE = 2,
  DISPERSION_STATUS_BUDGET_EXCEEDED = 3,
} DispersionStatus;

typedef enum DispersionObjective {
  DISPERSION_OBJECTIVE_MAX_SUM = 0,
  DISPERSION_OBJECTIVE_MAX_MIN = 1,
  DISPERSION_OBJECTIVE_MAX_MIN_SUM = 2,
  DISPERSION_OBJECTIVE_MIN_DIFF = 3,
  DISPERSION_OBJECTIVE_MAX_MEAN = 4,
} DispersionObjective;

/**
 * Opaque instance handle.
 */
typedef struct DispersionInstance DispersionInstance;

/**
 * Opaque solve result handle.
 */
typedef struct DispersionResult DispersionResult;

/**
 * Solver limits. Zero fields take the library defaults.
 */
typedef struct DispersionBudget {
  double time_limit_secs;
  uint64_t max_nodes;
} DispersionBudget;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty when none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *dispersion_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void dispersion_string_free(char *s);

/**
 * Parses an instance from its text format.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum DispersionError dispersion_instance_parse(const char *text, struct DispersionInstance **out);

/**
 * Generates a benchmark instance. `family` is one of `SOM`, `GKD`,
 * `GKD_D`, `MDG`.
 *
 * # Safety
 * `family` must be a nul-terminated string; `out` must be writable.
 */
enum DispersionError dispersion_instance_generate(const char *family,
                                                  size_t n,
                                                  size_t m,
                                                  uint64_t seed,
                                                  struct DispersionInstance **out);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must come from this library and not have been freed.
 */
void dispersion_instance_free(struct DispersionInstance *inst);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t dispersion_instance_n(const struct DispersionInstance *inst);

/**
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum DispersionError dispersion_instance_distance(const struct DispersionInstance *inst,
                                                  size_t i,
                                                  size_t j,
                                                  double *out);

/**
 * Serializes an instance to its text format.
 *
 * # Safety
 * `inst` must be a live handle; `out` must be writable.
 */
enum DispersionError dispersion_instance_write(const struct DispersionInstance *inst, char **out);

/**
 * Objective value of the subset `indices[0..len]` (0-based). `objective`
 * is a [`DispersionObjective`] value.
 *
 * # Safety
 * `inst` must be a live handle, `indices` must point to `len` values and
 * `out` must be writable.
 */
enum DispersionError dispersion_evaluate(const struct DispersionInstance *inst,
                                         uint32_t objective,
                                         const size_t *indices,
                                         size_t len,
                                         double *out);

/**
 * Solves `objective` (a [`DispersionObjective`] value) exactly. `budget` may be null.
 * For MaxMean, `m` is ignored.
 *
 * # Safety
 * `inst` must be a live handle; `budget` null or valid; `out` writable.
 */
enum DispersionError dispersion_solve(const struct DispersionInstance *inst,
                                      uint32_t objective,
                                      size_t m,
                                      const struct DispersionBudget *budget,
                                      struct DispersionResult **out);

/**
 * Bi-level model: `upper` (MaxSum or MaxMinSum) over the MaxMin optima.
 * `exact` selects branch and bound instead of capped enumeration.
 *
 * # Safety
 * `inst` must be a live handle; `budget` null or valid; `out` writable.
 */
enum DispersionError dispersion_solve_bilevel(const struct DispersionInstance *inst,
                                              uint32_t upper,
                                              size_t m,
                                              size_t cap,
                                              bool exact,
                                              const struct DispersionBudget *budget,
                                              struct DispersionResult **out);

/**
 * # Safety
 * `res` must be a live result handle.
 */
enum DispersionStatus dispersion_result_status(const struct DispersionResult *res);

/**
 * Objective value; fails with `InvalidArgument` when there is no incumbent.
 *
 * # Safety
 * `res` must be a live result handle; `out` writable.
 */
enum DispersionError dispersion_result_value(const struct DispersionResult *res, double *out);

/**
 * MaxMin optimum of a bi-level result.
 *
 * # Safety
 * `res` must be a live result handle; `out` writable.
 */
enum DispersionError dispersion_result_d_star(const struct DispersionResult *res, double *out);

/**
 * Number of selected nodes (0 for a null handle).
 *
 * # Safety
 * `res` must be null or a live result handle.
 */
size_t dispersion_result_subset_len(const struct DispersionResult *res);

/**
 * Copies the selected 0-based indices into `buf[0..cap]`.
 *
 * # Safety
 * `res` must be a live result handle and `buf` must hold `cap` values.
 */
enum DispersionError dispersion_result_subset(const struct DispersionResult *res,
                                              size_t *buf,
                                              size_t cap);

/**
 * Releases a result. Null is ignored.
 *
 * # Safety
 * `res` must come from this library and not have been freed.
 */
void dispersion_result_free(struct DispersionResult *res);

/**
 * Emits a MILP formulation as LP text. `kind` is one of `maxsum-kuo`,
 * `maxsum-w`, `maxmin-kuo`, `maxminsum`, `mindiff`, `node-packing`,
 * `packing-feasibility`; `l` is the threshold for the packing kinds and is
 * ignored otherwise.
 *
 * # Safety
 * `inst` must be a live handle, `kind` nul-terminated, `out` writable.
 */
enum DispersionError dispersion_export_lp(const struct DispersionInstance *inst,
                                          const char *kind,
                                          size_t m,
                                          double l,
                                          char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISPERSION_H */

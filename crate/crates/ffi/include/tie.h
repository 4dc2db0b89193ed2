/* C interface to the tie teaching-set solver. */

#pragma once

/* Generated with cbindgen:0.29.4 */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Call outcome. Anything other than `Ok` (and `BudgetExceeded`, which still
// produces a result) leaves out-parameters untouched.
typedef enum TieStatus {
  TIE_STATUS_OK = 0,
  // A required pointer argument was null.
  TIE_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  TIE_STATUS_INVALID_UTF8 = 2,
  // Input could not be read, parsed, or validated.
  TIE_STATUS_PARSE_ERROR = 3,
  // The instance admits no consistent weight vector.
  TIE_STATUS_NOT_REALIZABLE = 4,
  // Exact search ran out of nodes; the result holds its best cover.
  TIE_STATUS_BUDGET_EXCEEDED = 5,
  // The LP layer could not certify an answer.
  TIE_STATUS_NUMERICAL_ERROR = 6,
  // Any other failure, including a caught panic.
  TIE_STATUS_RUNTIME_ERROR = 7,
} TieStatus;

typedef enum TieMethod {
  TIE_METHOD_GREEDY = 0,
  TIE_METHOD_EXACT = 1,
} TieMethod;

typedef struct TieInstance TieInstance;

typedef struct TieResult TieResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Most recent error message for this thread, or an empty string. The
// pointer stays valid until the next failing call on the same thread.
const char *tie_last_error(void);

// Parses an instance from its JSON form. On `Ok`, `*out` owns the handle.
//
// # Safety
// `json` must be a valid nul-terminated string and `out` a valid pointer.
enum TieStatus tie_instance_from_json(const char *json, struct TieInstance **out);

// Loads an instance from a JSON file.
//
// # Safety
// `path` must be a valid nul-terminated string and `out` a valid pointer.
enum TieStatus tie_instance_load(const char *path, struct TieInstance **out);

// # Safety
// `instance` must come from a `tie_instance_*` constructor, at most once.
void tie_instance_free(struct TieInstance *instance);

// # Safety
// `instance` must be a live handle or null.
size_t tie_instance_num_states(const struct TieInstance *instance);

// # Safety
// `instance` must be a live handle or null.
size_t tie_instance_num_actions(const struct TieInstance *instance);

// # Safety
// `instance` must be a live handle or null.
size_t tie_instance_dim(const struct TieInstance *instance);

// Computes a teaching set. `node_budget` of zero means the default ceiling.
// Returns `Ok` or `BudgetExceeded` with `*out` set; any other status leaves
// `*out` untouched.
//
// # Safety
// `instance` must be a live handle and `out` a valid pointer.
enum TieStatus tie_solve(const struct TieInstance *instance,
                         enum TieMethod method,
                         uint64_t node_budget,
                         struct TieResult **out);

// # Safety
// `result` must come from `tie_solve`, at most once.
void tie_result_free(struct TieResult *result);

// Number of states in the teaching set, or 0 for null.
//
// # Safety
// `result` must be a live handle or null.
size_t tie_result_size(const struct TieResult *result);

// # Safety
// `result` must be a live handle or null.
size_t tie_result_num_extreme_rays(const struct TieResult *result);

// # Safety
// `result` must be a live handle or null.
bool tie_result_is_optimal(const struct TieResult *result);

// Copies the result's JSON document into `*out`.
//
// # Safety
// `result` must be a live handle and `out` a valid pointer.
enum TieStatus tie_result_to_json(const struct TieResult *result, char **out);

// Checks a teaching set given as a JSON array of state ids. On `Ok`,
// `*valid` holds the verdict; when invalid and `report` is non-null,
// `*report` receives a counterexample JSON document.
//
// # Safety
// `instance` must be a live handle, `teaching_json` a valid nul-terminated
// string, and `valid` a valid pointer. `report` may be null.
enum TieStatus tie_verify(const struct TieInstance *instance,
                          const char *teaching_json,
                          bool *valid,
                          char **report);

// Releases a string produced by this library.
//
// # Safety
// `s` must come from a `tie_*` call returning an owned string, at most once.
void tie_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#ifndef SUBMATROID_H
#define SUBMATROID_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmAlgorithm {
  SM_ALGORITHM_GREEDY = 0,
  SM_ALGORITHM_GREEDY_M = 1,
  SM_ALGORITHM_GREEDY_ON = 2,
} SmAlgorithm;

// Result of every call. Values 1 to 3 match the command-line exit codes.
typedef enum SmStatus {
  SM_STATUS_OK = 0,
  // Verification ran and a bound was violated; the report is still returned.
  SM_STATUS_BOUND_VIOLATED = 1,
  SM_STATUS_INVALID_ARGUMENT = 2,
  SM_STATUS_CAP_EXCEEDED = 3,
  SM_STATUS_NULL_POINTER = 4,
  SM_STATUS_INVALID_UTF8 = 5,
  SM_STATUS_PARSE_ERROR = 6,
  // An oracle broke an axiom.
  SM_STATUS_VALIDATION_FAILED = 7,
  SM_STATUS_INTERNAL = 8,
} SmStatus;

typedef enum SmMatroidShape {
  SM_MATROID_SHAPE_UNIFORM = 0,
  SM_MATROID_SHAPE_PARTITION = 1,
  SM_MATROID_SHAPE_EXPLICIT = 2,
} SmMatroidShape;

// Opaque instance handle.
typedef struct SmInstance SmInstance;

// Options for [`sm_solve`] and [`sm_verify`]. Start from
// [`sm_options_default`].
typedef struct SmOptions {
  enum SmAlgorithm algorithm;
  // `lowest`, `highest` or `prefer:...`; null means `lowest`.
  const char *tie_policy;
  // Relative comparison tolerance.
  double tolerance;
  // Arrival order for the online algorithm; null for the identity.
  const size_t *arrival;
  size_t arrival_len;
  // Number of sampled arrival orders for online verification; 0 sweeps all.
  size_t sample;
  uint64_t seed;
} SmOptions;

typedef struct SmInstanceSummary {
  size_t elements;
  size_t rank;
  // Zero unless the instance is a welfare (user × resource) instance.
  size_t users;
  size_t resources;
} SmInstanceSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *sm_version(void);

// Message for the most recent failed call on this thread, or null. The
// pointer stays valid until the next call on this thread.
const char *sm_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void sm_string_free(char *s);

struct SmOptions sm_options_default(void);

// Parses instance JSON. With `strict`, explicit matroid families must
// satisfy the axioms.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SmStatus sm_instance_from_json(const char *json, bool strict, struct SmInstance **out);

// # Safety
// `out` must be a valid pointer.
enum SmStatus sm_instance_tight_partition(double c,
                                          double d,
                                          double epsilon,
                                          size_t resources,
                                          struct SmInstance **out);

// # Safety
// `out` must be a valid pointer.
enum SmStatus sm_instance_tight_general(double c, double d, size_t rank, struct SmInstance **out);

// # Safety
// `out` must be a valid pointer.
enum SmStatus sm_instance_random(uint64_t seed,
                                 size_t elements,
                                 enum SmMatroidShape matroid,
                                 struct SmInstance **out);

// # Safety
// `out` must be a valid pointer.
enum SmStatus sm_instance_random_partition(uint64_t seed,
                                           size_t users,
                                           size_t resources,
                                           struct SmInstance **out);

// Releases an instance. Null is ignored.
//
// # Safety
// `instance` must come from this library and not have been freed.
void sm_instance_free(struct SmInstance *instance);

// # Safety
// `instance` and `out` must be valid pointers.
enum SmStatus sm_instance_summary(const struct SmInstance *instance, struct SmInstanceSummary *out);

// Serialises the instance in the file format.
//
// # Safety
// `instance` and `out` must be valid pointers.
enum SmStatus sm_instance_to_json(const struct SmInstance *instance, char **out);

// Runs an algorithm and writes the JSON run report to `out`.
//
// # Safety
// `instance`, `options` and `out` must be valid pointers; `options.arrival`
// must point to `arrival_len` elements when non-null.
enum SmStatus sm_solve(const struct SmInstance *instance,
                       const struct SmOptions *options,
                       char **out);

// Verifies an algorithm against the exact optimum and writes the JSON
// report to `out`. Returns [`SmStatus::BoundViolated`] with the report when
// a bound fails.
//
// # Safety
// `instance`, `options` and `out` must be valid pointers.
enum SmStatus sm_verify(const struct SmInstance *instance,
                        const struct SmOptions *options,
                        char **out);

// Checks the oracles against the axioms and writes the JSON report to
// `out`. Returns [`SmStatus::ValidationFailed`] with the report when any
// axiom fails.
//
// # Safety
// `instance` and `out` must be valid pointers.
enum SmStatus sm_validate(const struct SmInstance *instance, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUBMATROID_H */

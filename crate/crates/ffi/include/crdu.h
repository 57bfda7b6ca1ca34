#ifndef CRDU_H
#define CRDU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum CrduStatus {
  CRDU_STATUS_OK = 0,
  CRDU_STATUS_NULL_POINTER = 1,
  CRDU_STATUS_INVALID_UTF8 = 2,
  CRDU_STATUS_PARSE = 3,
  CRDU_STATUS_INVALID_ARGUMENT = 4,
  CRDU_STATUS_NOT_FOUND = 5,
  CRDU_STATUS_EMPTY_CORE = 6,
  CRDU_STATUS_UNSUPPORTED = 7,
  CRDU_STATUS_FAILED = 8,
  CRDU_STATUS_PANIC = 9,
} CrduStatus;

// A loaded decision model.
typedef struct CrduModel CrduModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failure on this thread, or NULL. The pointer stays
// valid until the next `crdu_*` call on the same thread.
const char *crdu_last_error(void);

// Library version as a static NUL-terminated string.
const char *crdu_version(void);

// Parses a model from JSON text and stores a new handle in `*out`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum CrduStatus crdu_model_from_json(const char *json, struct CrduModel **out);

// Loads a model file and stores a new handle in `*out`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum CrduStatus crdu_model_load(const char *path, struct CrduModel **out);

// Releases a handle. NULL is ignored.
//
// # Safety
// `model` must come from `crdu_model_from_json` or `crdu_model_load` and
// not have been freed already.
void crdu_model_free(struct CrduModel *model);

// Number of states of the model's space.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum CrduStatus crdu_model_state_count(const struct CrduModel *model, size_t *out);

// Value of the act with `len` payoffs, in state order.
//
// # Safety
// `model` must be a live handle, `payoffs` must point to `len` doubles and
// `out` must be writable.
enum CrduStatus crdu_model_value(const struct CrduModel *model,
                                 const double *payoffs,
                                 size_t len,
                                 double *out);

// Certainty equivalent of the act.
//
// # Safety
// As for `crdu_model_value`.
enum CrduStatus crdu_model_certainty_equivalent(const struct CrduModel *model,
                                                const double *payoffs,
                                                size_t len,
                                                double *out);

// Matching probability of the event whose bit `i` marks state `i`.
//
// # Safety
// `model` must be a live handle and `out` writable.
enum CrduStatus crdu_model_matching_probability(const struct CrduModel *model,
                                                uint32_t event_mask,
                                                double *out);

// Minimum over the core of the expected distorted utility of the act.
// `*exact` is set when the value is known to be the exact minimum.
//
// # Safety
// As for `crdu_model_value`; `exact` must be writable.
enum CrduStatus crdu_model_robust_value(const struct CrduModel *model,
                                        const double *payoffs,
                                        size_t len,
                                        double *out,
                                        bool *exact);

// Checks a named property such as "supermodular", "exact" or "DS".
//
// # Safety
// `model` must be a live handle, `property` NUL-terminated and `holds`
// writable.
enum CrduStatus crdu_model_check(const struct CrduModel *model, const char *property, bool *holds);

// Runs a verification suite; `*passed` receives the passing trial count.
// Returns `CRDU_STATUS_FAILED` when any trial fails.
//
// # Safety
// `suite` must be NUL-terminated and `passed` writable.
enum CrduStatus crdu_verify(const char *suite, size_t trials, uint64_t seed, size_t *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRDU_H */
